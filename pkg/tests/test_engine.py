import random
from fractions import Fraction
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from cghsat.cyclic import Cgh, canonical_form, complete
from cghsat.engine import (
    NotFreeError,
    addable,
    closure,
    enumerate_minimum_saturated,
    enumerate_saturated,
    ex_exact,
    find_copy,
    is_free,
    is_saturated,
    pairs_forming,
    sat_exact,
    satisfies_weight_hypothesis,
    weight_profile,
)
from cghsat.m1 import random_free_seed
from cghsat.patterns import ALL_R3, M1r, Pattern, conflict_graph

M1, M2, M3 = Pattern("M1"), Pattern("M2"), Pattern("M3")

# exhaustive solver output, frozen (columns in ALL_R3 order)
SAT = {
    6: {"M1": 17, "M2": 14, "M3": 19, "S1": 8, "S2": 6, "S3": 8, "D1": 6, "D2": 4},
    7: {"M1": 25, "M2": 14, "M3": 31, "S1": 8, "S2": 7, "S3": 11, "D1": 9, "D2": 6},
}
EX = {
    6: {"M1": 17, "M2": 14, "M3": 19, "S1": 14, "S2": 8, "S3": 12, "D1": 8, "D2": 6},
    7: {"M1": 28, "M2": 19, "M3": 31, "S1": 20, "S2": 11, "S3": 16, "D1": 14, "D2": 8},
}


def test_free_examples():
    assert not is_free(Cgh.from_edges(6, [(0, 1, 2), (3, 4, 5)]), M1)
    for F in ALL_R3:
        assert is_free(Cgh.from_edges(6, [(0, 1, 2)]), F)
    assert not is_free(complete(6, 3), M2)
    assert find_copy(complete(6, 3), M2) is not None


def test_saturated_examples():
    H = Cgh.from_edges(6, [(0, 1, 2)])
    assert not is_saturated(H, M1)
    assert (0, 1, 3) in addable(H, M1)
    assert (3, 4, 5) not in addable(H, M1)
    cons = Cgh(8, 3, frozenset(tuple(sorted((i, (i + 1) % 8, (i + 2) % 8))) for i in range(8)))
    assert is_saturated(cons, Pattern("S2"))


def test_closure_contract():
    C = closure(Cgh(6, 3), M1)
    assert len(C) == 17 and is_saturated(C, M1)
    assert closure(C, M1) == C
    with pytest.raises(NotFreeError):
        closure(Cgh.from_edges(6, [(0, 1, 2), (3, 4, 5)]), M1)


@settings(max_examples=40, deadline=None)
@given(st.integers(6, 9), st.sampled_from(ALL_R3), st.integers(0, 10**6))
def test_closure_of_random_free_seed_is_saturated_superset(n, F, seed):
    H = random_free_seed(n, F, random.Random(seed), max_edges=8)
    C = closure(H, F)
    assert H.edges <= C.edges
    assert is_saturated(C, F)


@pytest.mark.parametrize("n", [6, 7])
@pytest.mark.parametrize("F", ALL_R3, ids=str)
def test_sat_and_ex_frozen(n, F):
    rep = sat_exact(n, F)
    assert rep.exhaustive and rep.value == SAT[n][F.tag]
    assert is_saturated(rep.witnesses[0], F) and len(rep.witnesses[0]) == rep.value
    ex = ex_exact(n, F)
    assert ex.exhaustive and ex.value == EX[n][F.tag]
    assert is_free(ex.witnesses[0], F) and len(ex.witnesses[0]) == ex.value


def test_sat_values_from_formulas():
    for n in range(3, 11):
        assert sat_exact(n, Pattern("G0")).value == n // 2
        assert sat_exact(n, Pattern("G1")).value == 2 * n - 3
        assert sat_exact(n, M1r(2)).value == n
    assert sat_exact(8, M1).value == 34


def test_ex_formulas():
    assert ex_exact(5, M1).value == 10
    for n in (7, 8):
        assert ex_exact(n, M2).value == comb(n, 2) - 2
    for n in (6, 7, 8):
        assert ex_exact(n, M3).value == comb(n, 3) - comb(n - 3, 3)


def _mis_oracle(G):
    adj = G.adj
    memo = {}

    def best(cand):
        if cand == 0:
            return 0
        if cand in memo:
            return memo[cand]
        v = (cand & -cand).bit_length() - 1
        rest = cand & ~(1 << v)
        val = max(best(rest), 1 + best(rest & ~adj[v]))
        memo[cand] = val
        return val

    return best((1 << len(G)) - 1)


@pytest.mark.parametrize("F", ALL_R3, ids=str)
def test_ex_matches_memoized_oracle(F):
    assert ex_exact(6, F).value == _mis_oracle(conflict_graph(6, F))


def _min_saturated_oracle(n, F):
    return min(len(H) for H in enumerate_saturated(n, F))


@pytest.mark.parametrize("F", ALL_R3, ids=str)
def test_sat_matches_enumeration_oracle(F):
    assert sat_exact(6, F).value == _min_saturated_oracle(6, F)


def test_budget_truncation_and_threads():
    rep = sat_exact(8, M1, budget=5)
    assert not rep.exhaustive and rep.value >= 34
    par = sat_exact(7, Pattern("S3"), threads=2)
    seq = sat_exact(7, Pattern("S3"), threads=1)
    assert par.value == seq.value and par.witnesses == seq.witnesses and par.exhaustive


def test_minimum_enumeration():
    classes = enumerate_minimum_saturated(7, M1)
    assert len(classes) == 1 and len(classes[0]) == 25
    assert classes[0] == canonical_form(classes[0])
    sizes = {len(H) for H in enumerate_saturated(6, M1)}
    assert sizes == {17}
    assert {len(H) for H in enumerate_saturated(5, M1r(2))} == {5}


def test_weights():
    assert sum(weight_profile(Cgh.from_edges(6, [(0, 1, 2)])).values()) == 3
    w = weight_profile(Cgh.from_edges(6, [(0, 1, 2), (0, 3, 4)]))
    assert w[(0, 1, 2)] == Fraction(5, 2)
    assert not satisfies_weight_hypothesis(Cgh.from_edges(6, [(0, 1, 2), (3, 4, 5)]))


@settings(max_examples=60)
@given(st.integers(6, 12).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.sampled_from(list(combinations(range(n), 3))), min_size=1, max_size=15))))
def test_weights_sum_to_covered_vertices(fam):
    n, edges = fam
    H = Cgh(n, 3, frozenset(edges))
    assert sum(weight_profile(H).values()) == len(H.vertex_cover())


def test_pairs_forming():
    H = Cgh.from_edges(6, [(0, 1, 2), (3, 4, 5), (0, 1, 3)])
    assert pairs_forming(H, (0, 1, 2), M1) == [(3, 4, 5)]
