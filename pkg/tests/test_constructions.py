from math import log2

import pytest

from cghsat import constructions as cons
from cghsat.cyclic import Cgh
from cghsat.engine import closure, is_free, is_saturated, sat_exact
from cghsat.m1 import build_H_of_C, consecutive_tuple
from cghsat.patterns import M1r, Pattern

S1, S2, S3, M2, D1, D2 = (Pattern(t) for t in ("S1", "S2", "S3", "M2", "D1", "D2"))


def test_star_plus():
    assert len(cons.star_plus(6, 3)) == 17
    assert len(cons.star_plus(7, 3)) == 25
    assert len(cons.star_plus(8, 3)) == 34
    assert len(cons.star_plus(9, 3)) == 44
    assert is_saturated(cons.star_plus(10, 3), Pattern("M1"))
    for n, r in ((8, 3), (10, 4), (11, 4), (10, 5)):
        assert cons.star_plus(n, r) == build_H_of_C(n, r, consecutive_tuple(n, r - 1))
    assert is_saturated(cons.star_plus(8, 4), M1r(4))
    assert cons.star_plus_tuple(7, 3) == (5, 1, 6, 2, 0)
    for n, r in ((7, 3), (8, 3), (10, 4), (12, 5)):
        assert cons.star_plus_equivalence(n, r)
    with pytest.raises(ValueError):
        cons.star_plus(5, 3)


def test_consecutive_triples():
    assert len(cons.consecutive_triples(4)) == 4
    for n in range(5, 10):
        H = cons.consecutive_triples(n)
        assert len(H) == n and is_saturated(H, S2)
    assert is_free(cons.consecutive_triples(8), S3)
    # consecutive triples lie in every S3-saturated family
    assert cons.consecutive_triples(8).edges <= sat_exact(8, S3).witnesses[0].edges


def test_s2_blocks():
    first, rest = cons.s2_blocks_seed(13)
    assert {(1, 2, 4)} <= first.edges and first.n == 5
    assert len(cons.s2_blocks(12)) == 12
    for n in (8, 9, 10, 11, 13, 16):
        H = cons.s2_blocks(n)
        assert is_saturated(H, S1) and len(H) <= n + 35
    assert len(cons.s2_blocks(13)) == 15
    with pytest.raises(ValueError):
        cons.s2_blocks(7)


def test_s1_k4_blocks():
    assert len(cons.s1_k4_layout(12)) == 12
    assert cons.s1_k4_layout(12).edges >= {(0, 1, 6), (2, 3, 4), (8, 9, 10)}
    for n in (8, 12, 16):
        H = cons.s1_k4_blocks(n)
        assert len(H) == n and is_saturated(H, S1)
    with pytest.raises(ValueError):
        cons.s1_k4_blocks(10)


def test_m2_construction():
    with pytest.raises(ValueError, match="consecutive triple"):
        cons.m2_construction(6)
    for n in range(7, 13):
        H = cons.m2_construction(n)
        assert is_saturated(H, M2)
        # union of the four parts, counted directly
        parts = cons.m2_parts(n)
        assert len(H) == len(set().union(*parts.values())) == 3 * n - 3
    rep = cons.construction_report("m2", 10)
    assert rep.claimed_size == 28 and rep.actual_size == 27 and rep.warnings


def test_s3_recursive():
    assert len(cons.s3_recursive(3)) == 1
    assert cons.s3_size(64) <= 1152
    for n in range(3, 41):
        assert is_free(cons.s3_seed(n), S3)
    for n in range(3, 65):
        f = cons.s3_size(n)
        assert f <= cons.s3_recursion_bound(n)
        assert f <= 3 * n * log2(n)
    for n in (5, 8, 11):
        assert is_saturated(cons.s3_recursive(n), S3)


def test_fast_s3_closure_matches_generic():
    for n in range(3, 19):
        seed = cons.s3_seed(n)
        assert cons.s3_closure(seed) == closure(seed, S3)
    H = Cgh.from_edges(9, [(0, 2, 5), (1, 4, 7)])
    assert cons.s3_closure(H) == closure(H, S3)
    assert cons.s3_is_saturated(closure(H, S3))
    assert not cons.s3_is_saturated(H)


def test_d1_chords():
    assert len(cons.d1_chords(8)) == 12
    for n in range(7, 13):
        H = cons.d1_chords(n)
        assert is_saturated(H, D1)
        assert len(H) == sum(max(n - 2 * i - 2, 0) for i in range(n // 2))
    assert 0.8 <= len(cons.d1_chords(40)) / (40**2 / 4) <= 1.2


def test_d2_sum():
    assert (1, 2, 3) in cons.d2_seed(12).edges
    n = 30
    res = cons.d2_sum_construction(n)
    assert is_free(res.hprime, D2)
    assert n * n / 6 - 5 * n <= len(res.hprime) <= n * n / 6 + 5 * n
    assert len(res.closed) <= 5 * n * n / 24 + 5 * n
    assert res.hprime.edges <= res.closed.edges
    assert res.claim_holds
    assert (2, 3) in res.dangerous and (2, 5) not in res.dangerous


def test_reports():
    rep = cons.construction_report("star_plus", 8)
    assert rep.saturated and rep.actual_size == 34 and rep.ok
    assert cons.construction_report("d1_chords", 9).saturated
    assert cons.construction_report("consecutive_triples", 5).saturated
    d = cons.construction_report("d2_sum", 12).to_dict(include_edges=True)
    assert d["cgh"]["n"] == 12 and d["ok"]
    with pytest.raises(KeyError):
        cons.construction_report("nope", 8)


def test_constructions_bound_sat_from_above():
    for n in (7, 8):
        for tag in ("M1", "M2", "S1", "S2", "S3", "D1"):
            F = Pattern(tag)
            H = cons.construction_for(F, n)
            if H is None:
                continue
            assert is_saturated(H, F)
            assert sat_exact(n, F).value <= len(H)
