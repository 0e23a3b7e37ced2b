"""Named saturated families and their verification reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb, log2

import numpy as np

from .cyclic import Cgh, Edge
from .engine import closure, is_free, is_saturated
from .m1 import build_H_of_C
from .patterns import M1r, Pattern, forms

S1 = Pattern("S1")
S2 = Pattern("S2")
S3 = Pattern("S3")
M1 = Pattern("M1")
M2 = Pattern("M2")
D1 = Pattern("D1")
D2 = Pattern("D2")


def _triple(*vs: int) -> Edge:
    return tuple(sorted(vs))


# ---------------------------------------------------------------------------
# star plus a few extra edges
# ---------------------------------------------------------------------------


def star_plus(n: int, r: int) -> Cgh:
    """Star on ``v_0`` plus, for ``1 <= j < r``, every r-set through ``v_j`` meeting ``[v_{n-r+j}, v_{n-1}]``."""
    if r < 2:
        raise ValueError("r must be at least 2")
    if n < 2 * r:
        raise ValueError(f"n={n} is below 2r={2 * r}")
    edges = []
    for h in combinations(range(n), r):
        if 0 in h:
            edges.append(h)
            continue
        for j in range(1, r):
            if j in h and any(n - r + j <= x <= n - 1 for x in h):
                edges.append(h)
                break
    return Cgh(n, r, frozenset(edges))


def star_plus_tuple(n: int, r: int) -> tuple[int, ...]:
    """``(v_{n-r+1}, v_1, v_{n-r+2}, v_2, ..., v_{n-1}, v_{r-1}, v_0)``."""
    out: list[int] = []
    for j in range(1, r):
        out += [n - r + j, j]
    return tuple(out + [0])


def star_plus_equivalence(n: int, r: int) -> bool:
    """star_plus(n, r) is exactly H(C) for the interleaved tuple above."""
    return star_plus(n, r) == build_H_of_C(n, r, star_plus_tuple(n, r))


def star_plus_size(n: int) -> int:
    return comb(n - 1, 2) + 3 * n - 11


# ---------------------------------------------------------------------------
# linear-size families for the shared-vertex patterns
# ---------------------------------------------------------------------------


def consecutive_triples(n: int) -> Cgh:
    """``{v_i, v_{i+1}, v_{i+2}}`` for every i."""
    if n < 4:
        raise ValueError("consecutive_triples needs n >= 4")
    return Cgh(n, 3, frozenset(_triple(i, (i + 1) % n, (i + 2) % n) for i in range(n)))


def _k4(vs) -> list[Edge]:
    return list(combinations(sorted(vs), 3))


def s2_blocks_seed(n: int) -> tuple[Cgh, Cgh]:
    """Block layout before the final completion.

    Returns ``(first_block_seed, blocks)`` where the first block is the
    complete triple system on ``v_0..v_3`` plus ``{v_1, v_2, v_i}`` for
    ``3 <= i <= 3 + k`` on ``4 + k`` points and ``blocks`` holds the other
    ``K_4`` blocks on ``n`` points, with ``n = 4q + k``.
    """
    if n < 8:
        raise ValueError("s2_blocks needs n >= 8")
    q, k = divmod(n, 4)
    first = Cgh(4 + k, 3, frozenset(_k4(range(4)) + [(1, 2, i) for i in range(4, 4 + k)]))
    rest = []
    for ell in range(1, q):
        rest += _k4(range(4 * ell + k, 4 * ell + k + 4))
    return first, Cgh(n, 3, frozenset(rest))


def s2_blocks(n: int, pattern: Pattern = S1) -> Cgh:
    """``K_4`` blocks on consecutive runs, the first block patched and completed.

    The argument that makes this family saturated pairs a non-edge with a
    block edge whose other two vertices follow the shared vertex, which is the
    consecutive shared-vertex pattern; that is the default ``pattern``.
    """
    first, rest = s2_blocks_seed(n)
    first = closure(first, pattern)
    H = Cgh(n, 3, rest.edges | first.edges)
    return closure(H, pattern)


def s1_k4_layout(n: int) -> Cgh:
    """Disjoint ``K_4``'s with disjoint hulls: two nested blocks then consecutive ones."""
    if n % 4 or n < 4:
        raise ValueError("s1_k4_blocks needs n divisible by 4")
    if n == 4:
        return Cgh(4, 3, frozenset(_k4(range(4))))
    edges = _k4((0, 1, 6, 7)) + _k4((2, 3, 4, 5))
    for start in range(8, n, 4):
        edges += _k4(range(start, start + 4))
    return Cgh(n, 3, frozenset(edges))


def s1_k4_blocks(n: int) -> Cgh:
    return closure(s1_k4_layout(n), S1)


# ---------------------------------------------------------------------------
# M2
# ---------------------------------------------------------------------------


def m2_parts(n: int) -> dict[str, set[Edge]]:
    if n <= 6:
        raise ValueError(
            f"m2 construction needs n >= 7: at n={n} the edge {{v0,v4,v5}} is itself a consecutive triple"
        )
    cons = {_triple(i, (i + 1) % n, (i + 2) % n) for i in range(n)}
    h1 = {_triple(1, 4, x) for x in range(n) if x not in (1, 4)}
    h2 = {_triple(0, 1, x) for x in range(n) if x not in (0, 1)}
    h3 = {(1, 3, 5), (0, 2, 4), (0, 4, 5), (1, 2, 5)}
    return {"C": cons, "H1": h1, "H2": h2, "H3": h3}


def m2_construction(n: int) -> Cgh:
    parts = m2_parts(n)
    return Cgh(n, 3, frozenset(set().union(*parts.values())))


# ---------------------------------------------------------------------------
# S3: recursive halving, with a vectorized closure
# ---------------------------------------------------------------------------


def _crossing_free(n: int, edges) -> np.ndarray:
    """``A[x, y, z]``: the chord ``{y, z}`` crosses no chord of the link of ``x``.

    Two triples sharing exactly ``x`` form the crossing pattern iff their
    chords cross when the circle is cut at ``x``.
    """
    A = np.ones((n, n, n), dtype=bool)
    if not edges:
        return A
    E = np.array(sorted(edges), dtype=np.int64)
    M = np.zeros((n, n, n), dtype=np.int32)
    for t in range(3):
        x = E[:, t]
        a, b = (E[:, u] for u in range(3) if u != t)
        ra, rb = (a - x) % n, (b - x) % n
        np.add.at(M, (x, np.minimum(ra, rb), np.maximum(ra, rb)), 1)
    Q = np.zeros((n, n + 1, n + 1), dtype=np.int32)
    Q[:, 1:, 1:] = M.cumsum(1).cumsum(2)

    def rect(a1, a2, b1, b2):
        return Q[:, a2 + 1, b2 + 1] - Q[:, a1, b2 + 1] - Q[:, a2 + 1, b1] + Q[:, a1, b1]

    idx = np.arange(n)
    c, d = np.meshgrid(idx, idx, indexing="ij")
    upper = c < d
    cc, dd = c[upper], d[upper]
    # chords with one end strictly inside (c, d) and the other beyond d or before c
    cross = rect(cc + 1, dd - 1, dd + 1, np.full_like(dd, n - 1))
    inner = cc >= 1
    cross[:, inner] += rect(np.ones_like(cc[inner]), cc[inner] - 1, cc[inner] + 1, dd[inner] - 1)
    free_rel = np.zeros((n, n, n), dtype=bool)
    free_rel[:, cc, dd] = cross == 0
    free_rel[:, dd, cc] = cross == 0
    rel = (idx[None, :] - idx[:, None]) % n  # rel[x, y]
    A = free_rel[idx[:, None, None], rel[:, :, None], rel[:, None, :]]
    return A


def _unblocked_triples(n: int, edges) -> list[Edge]:
    """Triples (including edges) not forming the crossing pattern with any edge, colex order."""
    if n < 3:
        return []
    A = _crossing_free(n, edges)
    B = A & A.transpose(1, 0, 2) & A.transpose(1, 2, 0)
    p, q, s = np.nonzero(B)
    keep = (p < q) & (q < s)
    p, q, s = p[keep], q[keep], s[keep]
    order = np.lexsort((p, q, s))
    return [(int(p[t]), int(q[t]), int(s[t])) for t in order]


def s3_closure(H: Cgh) -> Cgh:
    """Colex closure under the crossing pattern; same output as the generic closure."""
    if H.r != 3:
        raise ValueError("s3_closure needs a 3-uniform family")
    n = H.n
    candidates = _unblocked_triples(n, H.edges)
    if len(H.edges & set(candidates)) != len(H):
        return closure(H, S3)  # not free: raises with the offending pair
    added: list[Edge] = []
    for e in candidates:
        if e in H.edges:
            continue
        if all(not forms(n, e, f, S3) for f in added):
            added.append(e)
    return Cgh(n, 3, H.edges | frozenset(added))


def s3_is_saturated(H: Cgh) -> bool:
    """Vectorized saturation test for the crossing pattern."""
    ok = set(_unblocked_triples(H.n, H.edges))
    return H.edges <= ok and ok <= H.edges


def _embed(edges, offset: int) -> set[Edge]:
    return {tuple(v + offset for v in e) for e in edges}


@lru_cache(maxsize=None)
def _s3_family(n: int) -> tuple[frozenset, frozenset]:
    """``(H'_n, H_n)`` as edge sets."""
    if n <= 2:
        return frozenset(), frozenset()
    h = n // 2
    left = _s3_family(h - 1)[1]
    right = _s3_family((n + 1) // 2 - 1)[1]
    edges = _embed(left, 1) | _embed(right, h + 1)
    edges |= {_triple(0, h, x) for x in range(n) if x not in (0, h)}
    hprime = frozenset(edges)
    full = s3_closure(Cgh(n, 3, hprime)).edges
    return hprime, full


def s3_seed(n: int) -> Cgh:
    """``H'_n``: recursive copies in the two open halves plus every edge through ``{v_0, v_{n//2}}``."""
    if n < 1:
        raise ValueError("n must be positive")
    return Cgh(n, 3, _s3_family(n)[0])


def s3_recursive(n: int) -> Cgh:
    if n < 1:
        raise ValueError("n must be positive")
    return Cgh(n, 3, _s3_family(n)[1])


def s3_size(n: int) -> int:
    return len(_s3_family(n)[1]) if n > 2 else 0


def s3_recursion_bound(n: int) -> int:
    """``3n + f(n//2 - 1) + f(ceil(n/2) - 1)``."""
    return 3 * n + s3_size(max(n // 2 - 1, 0)) + s3_size(max((n + 1) // 2 - 1, 0))


def s3_log_bound(n: int) -> float:
    return 3 * n * log2(n) if n > 1 else 0.0


# ---------------------------------------------------------------------------
# D1, D2
# ---------------------------------------------------------------------------


def d1_chords(n: int) -> Cgh:
    """``{v_i, v_j, v_{n-i-1}}`` with ``i < j < n-i-1`` and ``i <= n//2 - 1``."""
    if n < 6:
        raise ValueError("d1_chords needs n >= 6")
    edges = [(i, j, n - i - 1) for i in range(n // 2) for j in range(i + 1, n - i - 1)]
    return Cgh(n, 3, frozenset(edges))


def d1_size(n: int) -> int:
    return sum(max(n - 2 * i - 2, 0) for i in range(n // 2))


def d2_seed(n: int) -> Cgh:
    """``{v_i, v_j, v_{i+j}}`` for ``i >= 1``, ``2i <= j <= n-i`` (``v_n = v_0``)."""
    edges = set()
    for i in range(1, n):
        for j in range(2 * i, n - i + 1):
            edges.add(_triple(i, j, (i + j) % n))
    return Cgh(n, 3, frozenset(edges))


def dangerous_pairs(n: int) -> set[tuple[int, int]]:
    """``(i, j)`` with ``0 <= i < j <= n`` and ``3i/2 <= j <= 2i``; index ``n`` is ``v_0`` again."""
    return {(i, j) for i in range(n + 1) for j in range(i + 1, n + 1) if 3 * i <= 2 * j <= 4 * i}


@dataclass
class D2Result:
    hprime: Cgh
    closed: Cgh
    dangerous: set[tuple[int, int]]
    claim_holds: bool
    claim_violations: list[str]


def d2_sum_construction(n: int) -> D2Result:
    if n < 9:
        raise ValueError("d2_sum needs n >= 9")
    hp = d2_seed(n)
    closed = closure(hp, D2)
    P = dangerous_pairs(n)
    extra = sorted(closed.edges - hp.edges)
    violations = []
    usage: dict[tuple[int, int], int] = {}
    for e in extra:
        # v_0 may sit at either end of the linear order v_0 <= ... <= v_0
        readings = [e] + ([(e[1], e[2], n)] if e[0] == 0 else [])
        good = [
            (i, j, k) for i, j, k in readings if (i, j) in P and (j, k) in P and (i, k) not in P
        ]
        if not good:
            violations.append(f"edge {e} has the wrong pair pattern")
            continue
        i, j, k = good[0]
        for pair in ((i, j), (j, k)):
            usage[pair] = usage.get(pair, 0) + 1
    violations += [f"pair {p} lies in {c} added edges" for p, c in sorted(usage.items()) if c > 1]
    return D2Result(hp, closed, P, not violations, violations)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class ConstructionReport:
    name: str
    n: int
    cgh: Cgh
    pattern: Pattern
    claimed_size: int | None
    actual_size: int
    free: bool
    saturated: bool | None
    checks: dict[str, bool] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.free and self.saturated is not False and all(self.checks.values())

    def to_dict(self, include_edges: bool = False) -> dict:
        d = {
            "name": self.name,
            "n": self.n,
            "pattern": str(self.pattern),
            "claimed_size": self.claimed_size,
            "actual_size": self.actual_size,
            "free": self.free,
            "saturated": self.saturated,
            "checks": self.checks,
            "warnings": self.warnings,
            "notes": self.notes,
            "ok": self.ok,
        }
        if include_edges:
            d["cgh"] = self.cgh.to_dict()
        return d


SATURATION_CHECK_LIMIT = 60


def _flags(H: Cgh, F: Pattern) -> tuple[bool, bool | None]:
    if H.n > SATURATION_CHECK_LIMIT:
        if F == S3:
            sat = s3_is_saturated(H)
            return sat or is_free(H, F), sat
        return is_free(H, F), None
    free = is_free(H, F)
    return free, (is_saturated(H, F) if free else False)


def _report_star_plus(n: int, r: int = 3) -> ConstructionReport:
    H = star_plus(n, r)
    F = M1r(r)
    free, sat = _flags(H, F)
    claimed = star_plus_size(n) if r == 3 else None
    checks = {"size matches formula": len(H) == claimed} if claimed is not None else {}
    return ConstructionReport("star_plus", n, H, F, claimed, len(H), free, sat, checks)


def _report_consecutive(n: int) -> ConstructionReport:
    H = consecutive_triples(n)
    free, sat = _flags(H, S2)
    return ConstructionReport("consecutive_triples", n, H, S2, n, len(H), free, sat, {"size is n": len(H) == n})


def _report_s2_blocks(n: int) -> ConstructionReport:
    H = s2_blocks(n)
    free, sat = _flags(H, S1)
    checks = {"size <= n + 35": len(H) <= n + 35}
    notes = {"blocks": n // 4, "leftover": n % 4}
    return ConstructionReport("s2_blocks", n, H, S1, None, len(H), free, sat, checks, notes=notes)


def _report_s1_k4(n: int) -> ConstructionReport:
    layout = s1_k4_layout(n)
    H = closure(layout, S1)
    free, sat = _flags(H, S1)
    notes = {"layout_size": len(layout), "added_by_closure": len(H) - len(layout)}
    return ConstructionReport("s1_k4_blocks", n, H, S1, n, len(H), free, sat, {}, notes=notes)


def _report_m2(n: int) -> ConstructionReport:
    parts = m2_parts(n)
    H = m2_construction(n)
    free, sat = _flags(H, M2)
    claimed = 3 * n - 2
    checks = {"size in {3n-3, 3n-2}": len(H) in (3 * n - 3, 3 * n - 2)}
    warnings = []
    if len(H) != claimed:
        warnings.append(f"union has {len(H)} edges, claimed 3n-2 = {claimed}")
    overlaps = {
        f"{a}&{b}": len(parts[a] & parts[b]) for a, b in combinations(sorted(parts), 2) if parts[a] & parts[b]
    }
    notes = {"part_sizes": {k: len(v) for k, v in parts.items()}, "overlaps": overlaps}
    return ConstructionReport("m2", n, H, M2, claimed, len(H), free, sat, checks, warnings, notes)


def _report_s3(n: int) -> ConstructionReport:
    H = s3_recursive(n)
    seed = s3_seed(n)
    free, sat = _flags(H, S3)
    bound = s3_log_bound(n)
    checks = {
        "f(n) <= 3n log2 n": len(H) <= bound,
        "f(n) <= 3n + f(n//2-1) + f(ceil(n/2)-1)": len(H) <= s3_recursion_bound(n),
    }
    if n <= 40:
        checks["seed is free"] = is_free(seed, S3)
    notes = {"seed_size": len(seed), "log_bound": round(bound, 3)}
    return ConstructionReport("s3_recursive", n, H, S3, None, len(H), free, sat, checks, notes=notes)


def _report_d1(n: int) -> ConstructionReport:
    H = d1_chords(n)
    free, sat = _flags(H, D1)
    claimed = d1_size(n)
    checks = {"size matches sum": len(H) == claimed}
    return ConstructionReport("d1_chords", n, H, D1, claimed, len(H), free, sat, checks)


def _report_d2(n: int) -> ConstructionReport:
    res = d2_sum_construction(n)
    hp, H = res.hprime, res.closed
    free, sat = _flags(H, D2)
    checks = {
        "seed is free": is_free(hp, D2),
        "|seed| within 5n of n^2/6": abs(len(hp) - n * n / 6) <= 5 * n,
        "|closure| <= 5n^2/24 + 5n": len(H) <= 5 * n * n / 24 + 5 * n,
    }
    warnings = [] if res.claim_holds else res.claim_violations[:10]
    notes = {
        "seed_size": len(hp),
        "dangerous_pairs": len(res.dangerous),
        "added_edges": len(H) - len(hp),
        "pair_claim_holds": res.claim_holds,
    }
    return ConstructionReport("d2_sum", n, H, D2, None, len(H), free, sat, checks, warnings, notes)


BUILDERS = {
    "star_plus": _report_star_plus,
    "consecutive_triples": _report_consecutive,
    "s2_blocks": _report_s2_blocks,
    "s1_k4_blocks": _report_s1_k4,
    "m2": _report_m2,
    "m2_construction": _report_m2,
    "s3_recursive": _report_s3,
    "d1_chords": _report_d1,
    "d2_sum": _report_d2,
}

NAMES = ("star_plus", "consecutive_triples", "s2_blocks", "s1_k4_blocks", "m2", "s3_recursive", "d1_chords", "d2_sum")


def construction_report(name: str, n: int, r: int = 3) -> ConstructionReport:
    if name not in BUILDERS:
        raise KeyError(f"unknown construction {name!r}; choose from {', '.join(NAMES)}")
    if name == "star_plus":
        return _report_star_plus(n, r)
    return BUILDERS[name](n)


def construction_for(F: Pattern, n: int) -> Cgh | None:
    """Best-known named upper-bound family for ``F`` at ``n`` (None when no construction applies)."""
    tag = F.tag
    try:
        if tag == "M1":
            return star_plus(n, 3)
        if tag == "M2":
            return m2_construction(n)
        if tag == "S1":
            return s1_k4_blocks(n) if n % 4 == 0 else s2_blocks(n)
        if tag == "S2":
            return consecutive_triples(n)
        if tag == "S3":
            return s3_recursive(n)
        if tag == "D1":
            return d1_chords(n)
        if tag == "D2":
            return d2_sum_construction(n).closed
    except ValueError:
        return None
    return None

