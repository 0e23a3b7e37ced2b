import random
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from cghsat.constructions import star_plus
from cghsat.cyclic import Cgh, canonical_form, rotate
from cghsat.engine import closure, is_saturated, sat_exact
from cghsat.m1 import (
    ExtractionError,
    FullyConsecutive,
    WitnessTuple,
    build_H_of_C,
    check_basic_properties,
    check_relative_properties,
    consecutive_tuple,
    count_H_of_C,
    exhaustive_min,
    extract_tuple,
    find_shiftable,
    is_consecutive,
    lambda_rho,
    move_delta,
    optimize_tuple,
    r_valid_tuples,
    semi_valid_tuples,
    shift_tuple,
    short_tuple,
    structural_sat,
    structural_sat_report,
    thm_formula,
    two_step_tuple,
    verify_structure_theorem,
)
from cghsat.patterns import M1r, Pattern
from cghsat.verify import admissible_lengths, r2_structure_check, random_move_instances


def test_tuple_basics():
    C = WitnessTuple(6, (0, 4, 2))
    assert C.w(1) == 0 and C.w(4) == 0 and C.w(0) == 2
    assert C.is_semi_valid() and C.is_r_valid(3)
    assert WitnessTuple.parse(6, "0,4,2") == C
    with pytest.raises(ValueError):
        WitnessTuple(6, (0, 4))
    assert not WitnessTuple(6, (0, 2, 4)).is_semi_valid()


def test_H_of_C_examples():
    H = build_H_of_C(6, 3, (0, 4, 2))
    assert len(H) == 17
    missing = set(combinations(range(6), 3)) - H.edges
    assert missing == {(1, 2, 3), (3, 4, 5), (0, 1, 5)}
    assert count_H_of_C(7, 3, (0, 5, 1, 6, 2)) == 25
    assert count_H_of_C(7, 2, (0, 4, 2)) == 7


@settings(max_examples=60, deadline=None)
@given(st.integers(6, 11), st.sampled_from([3, 5, 7]), st.integers(0, 10**6), st.sampled_from([2, 3, 4]))
def test_counting_methods_agree(n, L, seed, r):
    if L > n:
        return
    rng = random.Random(seed)
    pts = sorted(rng.sample(range(n), L))
    C = next(T for T in semi_valid_tuples(n, L) if sorted(T.points) == pts)
    direct = len(build_H_of_C(n, r, C))
    assert count_H_of_C(n, r, C, method="enumerate") == direct
    assert count_H_of_C(n, r, C, method="ie") == direct


def test_consecutive_tuples_are_valid():
    assert consecutive_tuple(7, 2).is_r_valid(3)
    assert consecutive_tuple(8, 2).is_r_valid(3)
    assert consecutive_tuple(10, 3).is_r_valid(4)
    assert build_H_of_C(8, 3, consecutive_tuple(8, 2)) == star_plus(8, 3)


def test_lambda_rho_examples():
    H = build_H_of_C(6, 3, (0, 4, 2))
    lr = lambda_rho(H)
    assert lr.rho[0] == 2 and lr.lam[0] == 4
    assert lr.lam[1] == lr.rho[1] == 4
    assert all(lr.rho[(i + 1) % 6] == lr.lam[i] for i in range(6))
    assert check_basic_properties(H, lr) == [] and check_relative_properties(H, lr) == []


def test_extract_tuple_examples():
    C = extract_tuple(build_H_of_C(6, 3, (0, 4, 2)))
    assert sorted(C.points) == [0, 2, 4]
    H = closure(Cgh(8, 3), M1r(3))
    assert build_H_of_C(8, 3, extract_tuple(H)) == H
    S = star_plus(7, 3)
    T = build_H_of_C(7, 3, (5, 1, 6, 2, 0))
    assert canonical_form(S) == canonical_form(T)
    with pytest.raises(ValueError):
        extract_tuple(Cgh.from_edges(6, [(0, 1, 2)]))
    assert issubclass(ExtractionError, ValueError)


def test_structure_theorem_small():
    for n in (6, 7):
        rep = verify_structure_theorem(n, 3, trials=20, enumerate_tuples=True)
        assert rep.ok, rep.failures[:3]
        assert rep.tuples_checked > 0
    rep = verify_structure_theorem(8, 3, trials=100, enumerate_tuples=False, properties=False)
    assert rep.ok and rep.closures_checked == 100


def test_r2_structure():
    ok, data = r2_structure_check(6)
    assert ok, data


def test_shift_examples():
    C = WitnessTuple(7, (0, 4, 2))
    assert shift_tuple(C, 1, 1, 1).points == (1, 4, 2)
    assert shift_tuple(C, 1, 1, 0) == C
    assert shift_tuple(shift_tuple(C, 1, 1, 1), 1, 1, -1) == C
    assert is_consecutive(WitnessTuple(7, (0, 5, 1, 6, 2)), 1, 3)


def test_find_shiftable_examples():
    assert find_shiftable(WitnessTuple(9, (0, 5, 1, 7, 3))) == (5, 1)
    with pytest.raises(FullyConsecutive):
        find_shiftable(WitnessTuple(7, (0, 5, 1, 6, 2)))


def test_move_delta_random_instances():
    for C, i, k, r in random_move_instances(30, seed=3):
        md = move_delta(C, i, k, r)
        assert md.consistent and md.gap_identity
        assert 1 <= k <= C.ell
        s = md.sizes
        assert 2 * s[0] - s[-1] - s[1] == (
            md.direct["0,-1"] + md.direct["0,1"] - md.direct["-1,0"] - md.direct["1,0"]
        )
        assert min(s[-1], s[1]) < s[0]


def test_r2_moves_keep_size():
    for C in semi_valid_tuples(9, 5):
        assert count_H_of_C(9, 2, C) == 9


def test_optimizer():
    trace = optimize_tuple(10, 3, (0, 5, 1, 7, 3), trace=True)
    assert trace.size == thm_formula(10)
    assert all(b <= a for a, b in zip(trace.lengths, trace.lengths[1:]))
    for n in range(7, 10):
        assert optimize_tuple(n, 3, two_step_tuple(n)) is not None
        assert count_H_of_C(n, 3, optimize_tuple(n, 3, two_step_tuple(n))) == sat_exact(n, Pattern("M1")).value


def test_structural_sat_r3():
    for n in range(6, 31):
        assert structural_sat(n, 3) == comb(n - 1, 2) + 3 * n - 11
        assert count_H_of_C(n, 3, short_tuple(n)) - count_H_of_C(n, 3, two_step_tuple(n)) == n - 6
    for n in range(7, 11):
        assert exhaustive_min(n, 3)[0] == thm_formula(n)


def test_structural_sat_r4_matches_exhaustive():
    for n in (8, 9, 10):
        assert structural_sat(n, 4) == exhaustive_min(n, 4)[0]
    rep = structural_sat_report(30, 4)
    assert rep.value >= comb(29, 3)


def test_structural_sat_ratio_shrinks():
    # the excess over C(n, r-1) roughly halves as n doubles
    for r, ns in ((4, (60, 120, 240)), (5, (60, 120, 240, 480))):
        excess = [structural_sat(n, r) / comb(n, r - 1) - 1 for n in ns]
        assert all(0 < b < 0.6 * a for a, b in zip(excess, excess[1:]))
        assert excess[-1] < 0.10


def test_length_monotonicity_small():
    for r in (3, 4):
        for n in range(2 * r, 16):
            for ell in admissible_lengths(n, r):
                a = count_H_of_C(n, r, consecutive_tuple(n, ell))
                assert a < count_H_of_C(n, r, consecutive_tuple(n, ell + 1))


@settings(max_examples=30, deadline=None)
@given(st.integers(7, 10), st.integers(0, 10**6))
def test_closures_are_H_of_C(n, seed):
    from cghsat.m1 import check_saturated_family, random_free_seed

    H = closure(random_free_seed(n, Pattern("M1"), random.Random(seed)), Pattern("M1"))
    assert check_saturated_family(H) == []
    C = extract_tuple(H)
    assert C.is_r_valid(3)
    assert build_H_of_C(n, 3, rotate_tuple(C, 0)) == H


def rotate_tuple(C, s):
    return WitnessTuple(C.n, tuple((p + s) % C.n for p in C.points))


def test_all_valid_tuples_saturated_n7():
    for C in r_valid_tuples(7, 3):
        assert is_saturated(build_H_of_C(7, 3, C), Pattern("M1"))
