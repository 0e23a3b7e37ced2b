"""Structure of families saturated for two geometrically disjoint edges.

Every such family is ``H(C)``: all r-sets meeting each closed arc
``[w_i, w_{i-1}]`` of an odd witness tuple ``C``.  This module builds and
counts ``H(C)``, recovers ``C`` from a saturated family through the
nearest-left / nearest-right neighbour maps, implements the local moves that
shift a run of consecutive tuple points, and minimizes ``|H(C)|``.

Tuple positions are 1-based in the public API (``w_1`` is ``points[0]``) to
match the usual indexing of the tuple; vertices are 0-based.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .cyclic import Cgh, Edge, closed_arc_mask, edge_mask, in_closed_arc
from .engine import closure, is_free, is_saturated
from .patterns import M1r, Pattern, forms


def binom(a: int, b: int) -> int:
    if a < 0 or b < 0 or b > a:
        return 0
    return comb(a, b)


# ---------------------------------------------------------------------------
# witness tuples
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WitnessTuple:
    """An odd tuple ``(w_1, ..., w_{2l+1})`` of vertices of the n-cycle."""

    n: int
    points: tuple[int, ...]

    def __post_init__(self) -> None:
        pts = tuple(int(p) % self.n for p in self.points)
        if len(pts) < 3 or len(pts) % 2 == 0:
            raise ValueError(f"tuple length must be odd and at least 3, got {len(pts)}")
        object.__setattr__(self, "points", pts)

    @classmethod
    def parse(cls, n: int, text: str) -> "WitnessTuple":
        return cls(n, tuple(int(x) for x in text.replace(" ", "").strip("()[]").split(",") if x))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def ell(self) -> int:
        return len(self.points) // 2

    def w(self, p: int) -> int:
        """``w_p`` with the index taken modulo the length (``w_0 = w_L``)."""
        return self.points[(p - 1) % len(self.points)]

    def reindexed(self, i: int) -> "WitnessTuple":
        """Same tuple with ``w_i`` moved to position 1."""
        L = len(self.points)
        return WitnessTuple(self.n, tuple(self.w(i + t) for t in range(L)))

    def cyclic_sequence(self) -> list[int]:
        """``w_1, w_3, ..., w_L, w_2, ..., w_{L-1}``: the order required on the circle."""
        return list(self.points[0::2]) + list(self.points[1::2])

    def is_semi_valid(self) -> bool:
        seq = self.cyclic_sequence()
        if len(set(seq)) != len(seq):
            return False
        total = sum((seq[(t + 1) % len(seq)] - seq[t]) % self.n for t in range(len(seq)))
        return total == self.n

    def arc_sizes(self) -> list[int]:
        """``|[w_i, w_{i-1}]|`` for i = 1..L."""
        return [(self.w(i - 1) - self.w(i)) % self.n + 1 for i in range(1, len(self) + 1)]

    def is_r_valid(self, r: int) -> bool:
        return self.is_semi_valid() and all(s >= r for s in self.arc_sizes())

    def arc_masks(self) -> list[int]:
        return [closed_arc_mask(self.n, self.w(i), self.w(i - 1)) for i in range(1, len(self) + 1)]

    def to_list(self) -> list[int]:
        return list(self.points)

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.points) + ")"


def _as_tuple(n: int, C) -> WitnessTuple:
    if isinstance(C, WitnessTuple):
        if C.n != n:
            raise ValueError(f"tuple lives on n={C.n}, expected n={n}")
        return C
    return WitnessTuple(n, tuple(C))


def consecutive_tuple(n: int, m: int) -> WitnessTuple:
    """``(v_{n-m}, v_1, v_{n-m+1}, v_2, ..., v_{n-1}, v_m, v_0)``, length ``2m+1``."""
    if m < 1 or n < 2 * m + 1:
        raise ValueError(f"no consecutive tuple of length {2 * m + 1} on {n} points")
    pts = []
    for q in range(m):
        pts.append((n - m + q) % n)
        pts.append(q + 1)
    pts.append(0)
    return WitnessTuple(n, tuple(pts))


def short_tuple(n: int) -> WitnessTuple:
    """``(v_0, v_{n-2}, v_2)``: the best 3-valid triple."""
    return WitnessTuple(n, (0, n - 2, 2))


def two_step_tuple(n: int) -> WitnessTuple:
    """``(v_0, v_{n-2}, v_1, v_{n-1}, v_2)``."""
    return WitnessTuple(n, (0, n - 2, 1, n - 1, 2))


# ---------------------------------------------------------------------------
# H(C)
# ---------------------------------------------------------------------------


def build_H_of_C(n: int, r: int, C) -> Cgh:
    """All r-sets meeting every closed arc ``[w_i, w_{i-1}]``."""
    C = _as_tuple(n, C)
    if not C.is_semi_valid():
        raise ValueError(f"tuple {C} is not semi-valid on {n} points")
    arcs = C.arc_masks()
    edges = [e for e in combinations(range(n), r) if all(edge_mask(e) & a for a in arcs)]
    return Cgh(n, r, frozenset(edges))


def count_H_of_C(n: int, r: int, C, method: str = "auto") -> int:
    """``|H(C)|`` by inclusion-exclusion over missed arcs, or by enumeration.

    An r-set misses arc ``A`` iff it lies in the complement of ``A``, so the
    number of r-sets meeting every arc is the alternating sum of
    ``C(n - |union of S|, r)`` over subsets ``S`` of arcs.
    """
    C = _as_tuple(n, C)
    if not C.is_semi_valid():
        raise ValueError(f"tuple {C} is not semi-valid on {n} points")
    arcs = C.arc_masks()
    if method == "auto":
        method = "ie" if (1 << len(arcs)) <= comb(n, r) else "enumerate"
    if method == "enumerate":
        return sum(1 for e in combinations(range(n), r) if all(edge_mask(e) & a for a in arcs))
    if method != "ie":
        raise ValueError(f"unknown counting method {method!r}")
    L = len(arcs)
    unions = [0] * (1 << L)
    total = 0
    for s in range(1 << L):
        if s:
            low = s & -s
            unions[s] = unions[s ^ low] | arcs[low.bit_length() - 1]
        sign = -1 if bin(s).count("1") & 1 else 1
        total += sign * comb(n - unions[s].bit_count(), r)
    return total


def cycle_plus_leaves(n: int, C) -> set[Edge]:
    """Odd cycle on the tuple plus every leaf ``{v, w_i}`` with ``v`` in ``(w_{i-1}, w_{i+1})``."""
    C = _as_tuple(n, C)
    L = len(C)
    out = set()
    for i in range(1, L + 1):
        wi = C.w(i)
        out.add(tuple(sorted((wi, C.w(i + 1)))))
        a, b = C.w(i - 1), C.w(i + 1)
        for d in range(1, (b - a) % n):
            v = (a + d) % n
            if v != wi:
                out.add(tuple(sorted((v, wi))))
    return out


def star_tuple(n: int, r: int) -> WitnessTuple:
    """The tuple whose ``H(C)`` is the star-plus family on ``n`` points."""
    return consecutive_tuple(n, r - 1)


# ---------------------------------------------------------------------------
# nearest neighbours and tuple extraction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LambdaRho:
    n: int
    lam: tuple[int, ...]
    rho: tuple[int, ...]

    def interval(self, i: int) -> frozenset[int]:
        """``[rho(v_i), lambda(v_i)]``."""
        a, b = self.rho[i], self.lam[i]
        return frozenset((a + t) % self.n for t in range((b - a) % self.n + 1))

    def to_dict(self) -> dict:
        return {"n": self.n, "lambda": list(self.lam), "rho": list(self.rho)}


def lambda_rho(H: Cgh) -> LambdaRho:
    """Nearest-left and nearest-right neighbour of every vertex.

    ``lambda(v_i)`` starts the shortest closed arc ending at ``v_i`` that
    contains an edge through ``v_i``; ``rho(v_i)`` ends the shortest closed
    arc starting at ``v_i`` with the same property.
    """
    n = H.n
    back = [None] * n
    fwd = [None] * n
    for h in H.edges:
        for i in h:
            b = max((i - x) % n for x in h)
            f = max((x - i) % n for x in h)
            if back[i] is None or b < back[i]:
                back[i] = b
            if fwd[i] is None or f < fwd[i]:
                fwd[i] = f
    missing = [i for i in range(n) if back[i] is None]
    if missing:
        raise ValueError(f"vertex {missing[0]} has degree 0; the family is not saturated")
    lam = tuple((i - back[i]) % n for i in range(n))
    rho = tuple((i + fwd[i]) % n for i in range(n))
    return LambdaRho(n, lam, rho)


def _members(n: int, a: int, b: int) -> set[int]:
    return {(a + t) % n for t in range((b - a) % n + 1)}


def check_basic_properties(H: Cgh, lr: LambdaRho | None = None) -> list[str]:
    """Failures of the four single-vertex properties of a saturated family."""
    n, r = H.n, H.r
    fails = []
    deg = H.degrees()
    if any(d == 0 for d in deg):
        return [f"(1) vertex {deg.index(0)} has degree 0"]
    lr = lr or lambda_rho(H)
    for i in range(n):
        lam, rho = lr.lam[i], lr.rho[i]
        if lam in _members(n, (i - r + 2) % n, (i + r - 1) % n):
            fails.append(f"(2) lambda({i})={lam} too close")
        if rho in _members(n, (i - r + 1) % n, (i + r - 2) % n):
            fails.append(f"(2) rho({i})={rho} too close")
        if lam == i or rho == i or not (0 < (rho - i) % n <= (lam - i) % n):
            fails.append(f"(3) order lambda<v<rho<=lambda fails at {i}")
        for j in lr.interval(i):
            if j == i:
                continue
            others = [v for v in range(n) if v not in (i, j)]
            for rest in combinations(others, r - 2):
                if tuple(sorted((i, j) + rest)) not in H.edges:
                    fails.append(f"(4) {sorted((i, j) + rest)} missing for v={i}, v_j={j}")
                    break
    return fails


def check_relative_properties(H: Cgh, lr: LambdaRho | None = None) -> list[str]:
    """Failures of the four cross-vertex properties of a saturated family."""
    n = H.n
    lr = lr or lambda_rho(H)
    fails = []
    for i in range(n):
        if lr.rho[(i + 1) % n] != lr.lam[i]:
            fails.append(f"(1) rho({(i + 1) % n}) != lambda({i})")
    ivs = [lr.interval(i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if len(ivs[i] & ivs[j]) > 1:
                fails.append(f"(2) intervals of {i} and {j} share {len(ivs[i] & ivs[j])} vertices")
    for j in range(n):
        pair = {j, (j + 1) % n}
        cnt = sum(1 for iv in ivs if pair <= iv)
        if cnt != 1:
            fails.append(f"(3) pair {j},{(j + 1) % n} lies in {cnt} intervals")
    for i in range(n):
        if lr.lam[i] != lr.rho[i]:
            p = lr.rho[i]
            if lr.lam[p] != i:
                fails.append(f"(4) lambda(rho({i})) != {i}")
            if not in_closed_arc(n, lr.rho[p], lr.lam[i], i) or lr.rho[p] == i:
                fails.append(f"(4) rho(rho({i})) outside [lambda({i}), v_{i})")
    return fails


class ExtractionError(ValueError):
    pass


def extract_tuple(H: Cgh, lr: LambdaRho | None = None) -> WitnessTuple:
    """Recover ``C`` with ``H = H(C)`` by iterating ``lambda``.

    Starts at the smallest vertex whose two neighbours differ.
    """
    n, r = H.n, H.r
    lr = lr or lambda_rho(H)
    starts = [i for i in range(n) if lr.lam[i] != lr.rho[i]]
    if not starts:
        raise ExtractionError("every vertex has lambda == rho; the family is not saturated")
    w1 = starts[0]
    pts = [w1]
    cur = lr.lam[w1]
    while cur != w1:
        if cur in pts or len(pts) > n:
            raise ExtractionError(f"lambda iteration from {w1} does not return to it")
        pts.append(cur)
        cur = lr.lam[cur]
    if len(pts) % 2 == 0 or len(pts) < 3:
        raise ExtractionError(f"lambda cycle through {w1} has length {len(pts)}, expected odd >= 3")
    C = WitnessTuple(n, tuple(pts))
    if not C.is_semi_valid():
        raise ExtractionError(f"extracted tuple {C} is not semi-valid")
    if not C.is_r_valid(r):
        raise ExtractionError(f"extracted tuple {C} is not {r}-valid")
    return C


# ---------------------------------------------------------------------------
# tuple enumeration
# ---------------------------------------------------------------------------


def _compositions(total: int, parts: int, minimum: int = 1):
    if parts == 1:
        if total >= minimum:
            yield (total,)
        return
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in _compositions(total - first, parts - 1, minimum):
            yield (first,) + rest


def tuple_from_gaps(n: int, gaps, start: int = 0) -> WitnessTuple:
    """Tuple whose circle order ``w_1, w_3, ..., w_L, w_2, ..., w_{L-1}`` has these gaps."""
    L = len(gaps)
    if sum(gaps) != n:
        raise ValueError("gaps must sum to n")
    seq = [start % n]
    for g in gaps[:-1]:
        seq.append((seq[-1] + g) % n)
    ell = L // 2
    pts = [0] * L
    for a in range(ell + 1):
        pts[2 * a] = seq[a]
    for b in range(1, ell + 1):
        pts[2 * b - 1] = seq[ell + b]
    return WitnessTuple(n, tuple(pts))


def gaps_of(C: WitnessTuple) -> list[int]:
    seq = C.cyclic_sequence()
    return [(seq[(t + 1) % len(seq)] - seq[t]) % C.n for t in range(len(seq))]


def gaps_r_valid(gaps, r: int) -> bool:
    """Every arc ``[w_i, w_{i-1}]`` spans ``l`` consecutive gaps of the circle order."""
    L = len(gaps)
    ell = L // 2
    doubled = list(gaps) + list(gaps)
    return all(sum(doubled[t:t + ell]) + 1 >= r for t in range(L))


def semi_valid_tuples(n: int, L: int):
    """Every semi-valid tuple of length ``L`` on ``n`` points."""
    ell = L // 2
    for pts in combinations(range(n), L):
        for rot in range(L):
            seq = pts[rot:] + pts[:rot]
            out = [0] * L
            for a in range(ell + 1):
                out[2 * a] = seq[a]
            for b in range(1, ell + 1):
                out[2 * b - 1] = seq[ell + b]
            yield WitnessTuple(n, tuple(out))


def r_valid_tuples(n: int, r: int, L: int | None = None):
    lengths = [L] if L is not None else range(3, n + 1, 2)
    for length in lengths:
        for C in semi_valid_tuples(n, length):
            if C.is_r_valid(r):
                yield C


def _canonical_gaps(gaps) -> tuple[int, ...]:
    L = len(gaps)
    return min(tuple(gaps[t:] + gaps[:t]) for t in range(L))


def r_valid_gap_classes(n: int, r: int, L: int):
    """r-valid gap vectors of length ``L`` up to rotation (H(C) size depends only on these)."""
    seen = set()
    for g in _compositions(n, L):
        c = _canonical_gaps(list(g))
        if c in seen:
            continue
        seen.add(c)
        if gaps_r_valid(c, r):
            yield c


def exhaustive_min(n: int, r: int, lengths=None) -> tuple[int, WitnessTuple]:
    """Minimum ``|H(C)|`` over all r-valid tuples (brute-force oracle for small n)."""
    best = None
    lengths = lengths or range(3, n + 1, 2)
    for L in lengths:
        for g in r_valid_gap_classes(n, r, L):
            C = tuple_from_gaps(n, g)
            size = count_H_of_C(n, r, C)
            if best is None or size < best[0]:
                best = (size, C)
    if best is None:
        raise ValueError(f"no {r}-valid tuple on {n} points")
    return best


# ---------------------------------------------------------------------------
# local moves
# ---------------------------------------------------------------------------


def run_length(C: WitnessTuple, i: int) -> int:
    """Largest k with ``w_{i+2s} = v_{j+s}`` for ``0 <= s < k`` (capped at the length)."""
    L, n = len(C), C.n
    j = C.w(i)
    k = 1
    while k < L and C.w(i + 2 * k) == (j + k) % n:
        k += 1
    return k


def is_consecutive(C: WitnessTuple, i: int, k: int) -> bool:
    return 1 <= k <= len(C) and run_length(C, i) >= k


def fully_consecutive_start(C: WitnessTuple) -> int | None:
    for i in range(1, len(C) + 1):
        if run_length(C, i) == len(C):
            return i
    return None


def shift_tuple(C: WitnessTuple, i: int, k: int, m: int) -> WitnessTuple:
    """Move the run ``w_i, w_{i+2}, ..., w_{i+2k-2}`` by ``m`` positions clockwise."""
    if not is_consecutive(C, i, k):
        raise ValueError(f"tuple {C} is not ({i},{k})-consecutive")
    L, n = len(C), C.n
    j = C.w(i)
    pts = list(C.points)
    for s in range(k):
        pts[(i - 1 + 2 * s) % L] = (j + s + m) % n
    return WitnessTuple(n, tuple(pts))


class FullyConsecutive(ValueError):
    """The tuple is a single run of consecutive points; it is optimal for its length."""

    def __init__(self, C: WitnessTuple, i: int):
        self.tuple = C
        self.start = i
        super().__init__(f"tuple {C} is ({i},{len(C)})-consecutive")


def find_shiftable(C: WitnessTuple) -> tuple[int, int]:
    """A run ``(i, k)`` with ``1 <= k <= l`` whose shifts by +-1 stay semi-valid.

    Takes the longest run (first position on ties), then the maximal run
    starting right after it.
    """
    if not C.is_semi_valid():
        raise ValueError(f"tuple {C} is not semi-valid")
    L = len(C)
    start = fully_consecutive_start(C)
    if start is not None:
        raise FullyConsecutive(C, start)
    runs = [run_length(C, i) for i in range(1, L + 1)]
    k_prime = max(runs)
    i_prime = runs.index(k_prime) + 1
    i = (i_prime + 2 * k_prime - 1) % L + 1
    return i, run_length(C, i)


@dataclass
class MoveDelta:
    """Gap statistics and edge-set differences for shifting one run."""

    i: int
    k: int
    t: dict[int, int]
    t_greater: dict[int, int]
    t_less: dict[int, int]
    formula: dict[str, list[int]]
    brute: dict[str, list[int]]
    direct: dict[str, int]
    sizes: dict[int, int]
    gap_identity: bool
    consistent: bool = field(default=False)

    def totals(self) -> dict[str, int]:
        return {key: sum(v) for key, v in self.formula.items()}

    def to_dict(self) -> dict:
        return {
            "i": self.i,
            "k": self.k,
            "t": {str(s): v for s, v in sorted(self.t.items())},
            "formula": self.formula,
            "brute": self.brute,
            "direct": self.direct,
            "sizes": {str(m): v for m, v in sorted(self.sizes.items())},
            "gap_identity": self.gap_identity,
            "consistent": self.consistent,
        }


_KEYS = {(-1, 0): "-1,0", (0, -1): "0,-1", (0, 1): "0,1", (1, 0): "1,0"}


def move_delta(C: WitnessTuple, i: int, k: int, r: int) -> MoveDelta:
    """Closed-form sizes of ``E^s_{m,m'}`` for the shift of run ``(i, k)``, checked against enumeration.

    With the tuple reindexed so that the run starts at ``w_1 = v_j``:
    ``t_s = |(w_{2s}, w_{2s+2})|`` for ``0 <= s < k``,
    ``t_k = |(w_{2k}, v_j)| - 1`` and ``t_{-1} = |(v_{j+k-1}, w_0)| - 2``.
    These make ``n - 3 = t_s + (t_{>s} + k) + (t_{<s} + k + 1)`` hold for every s.
    """
    n = C.n
    if not is_consecutive(C, i, k):
        raise ValueError(f"tuple {C} is not ({i},{k})-consecutive")
    shifted = {m: shift_tuple(C, i, k, m) for m in (-1, 0, 1)}
    for m, T in shifted.items():
        if not T.is_semi_valid():
            raise ValueError(f"shift by {m} of run ({i},{k}) gives non-semi-valid {T}")
    D = C.reindexed(i)
    w = D.w
    j = w(1)

    def open_size(a: int, b: int) -> int:
        return (b - a) % n - 1

    t = {s: open_size(w(2 * s), w(2 * s + 2)) for s in range(k)}
    t[k] = open_size(w(2 * k), j) - 1
    t[-1] = open_size((j + k - 1) % n, w(0)) - 2
    t_gt = {s: sum(t[x] for x in range(s + 1, k + 1)) for s in range(k)}
    t_lt = {s: sum(t[x] for x in range(-1, s)) for s in range(k)}
    gap_identity = all(n - 3 == t[s] + (t_gt[s] + k) + (t_lt[s] + k + 1) for s in range(k))

    formula: dict[str, list[int]] = {}
    for m in (-1, 0):
        formula[_KEYS[(m, m + 1)]] = [
            sum(binom(t[s] + 1, p) * binom(t_gt[s] + k + m, r - 1 - p) for p in range(1, r))
            for s in range(k)
        ]
        formula[_KEYS[(m + 1, m)]] = [
            sum(binom(t[s] + 1, p) * binom(t_lt[s] + k - m, r - 1 - p) for p in range(1, r))
            for s in range(k)
        ]

    def arc(a: int, b: int, left: bool, right: bool) -> set[int]:
        out = _members(n, a, b)
        if not left:
            out.discard(a)
        if not right:
            out.discard(b)
        return out

    brute: dict[str, list[int]] = {key: [] for key in formula}
    everything = list(combinations(range(n), r))
    for s in range(k):
        a, b = w(2 * s), w(2 * s + 2)
        for m in (-1, 0):
            top = (j + s + m) % n
            box = arc(a, top, False, True)
            hit = arc(a, b, False, True)
            cnt = sum(1 for e in everything if top in e and set(e) <= box and hit & set(e))
            brute[_KEYS[(m, m + 1)]].append(cnt)
            bottom = (j + s + m + 1) % n
            box = arc(bottom, b, True, False)
            hit = arc(a, b, True, False)
            cnt = sum(1 for e in everything if bottom in e and set(e) <= box and hit & set(e))
            brute[_KEYS[(m + 1, m)]].append(cnt)

    Hs = {m: build_H_of_C(n, r, T).edges for m, T in shifted.items()}
    direct = {key: len(Hs[a] - Hs[b]) for (a, b), key in _KEYS.items()}
    sizes = {m: len(Hs[m]) for m in Hs}
    md = MoveDelta(i, k, t, t_gt, t_lt, formula, brute, direct, sizes, gap_identity)
    md.consistent = (
        formula == brute
        and all(sum(formula[key]) == direct[key] for key in formula)
        and all(
            sizes[a] - sizes[b] == direct[_KEYS[(a, b)]] - direct[_KEYS[(b, a)]]
            for a, b in ((0, 1), (-1, 0))
        )
    )
    return md


# ---------------------------------------------------------------------------
# optimization
# ---------------------------------------------------------------------------


@dataclass
class OptimizeTrace:
    result: WitnessTuple
    size: int
    moves: list[tuple[int, int, int, int]]  # (i, k, m, new size)
    lengths: list[int]
    stopped: str


def optimize_tuple(n: int, r: int, C0, trace: bool = False):
    """Shift runs while ``|H(C)|`` strictly decreases, then compare with shorter canonical tuples.

    Shifts that break r-validity are discarded.  Between two equally good
    shifts the clockwise one is taken.
    """
    C = _as_tuple(n, C0)
    if not C.is_r_valid(r):
        raise ValueError(f"starting tuple {C} is not {r}-valid")
    size = count_H_of_C(n, r, C)
    moves = []
    lengths = [len(C)]
    stopped = "fully consecutive"
    while True:
        try:
            i, k = find_shiftable(C)
        except FullyConsecutive:
            break
        best = None
        for m in (1, -1):
            T = shift_tuple(C, i, k, m)
            if not T.is_r_valid(r):
                continue
            s = count_H_of_C(n, r, T)
            if best is None or s < best[0]:
                best = (s, m, T)
        if best is None or best[0] >= size:
            stopped = "no strictly improving shift"
            break
        size, m, C = best[0], best[1], best[2]
        moves.append((i, k, m, size))
        lengths.append(len(C))
    candidates = [(size, len(C), C)]
    for ell in range(max(r - 1, 1), C.ell + 1):
        if n >= 2 * ell + 1:
            T = consecutive_tuple(n, ell)
            if T.is_r_valid(r):
                candidates.append((count_H_of_C(n, r, T), len(T), T))
    if r == 3 and n >= 6:
        T = short_tuple(n)
        candidates.append((count_H_of_C(n, r, T), len(T), T))
    size, _, C = min(candidates, key=lambda c: (c[0], c[1]))
    lengths.append(len(C))
    if trace:
        return OptimizeTrace(C, size, moves, lengths, stopped)
    return C


@dataclass
class StructuralReport:
    n: int
    r: int
    value: int
    witness: WitnessTuple
    exhaustive: bool
    details: dict

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "value": self.value,
            "witness": self.witness.to_list(),
            "exhaustive": self.exhaustive,
            "details": self.details,
        }


def structural_sat_report(n: int, r: int, search_limit: int = 20000, seed: int = 0) -> StructuralReport:
    """Minimum ``|H(C)|`` over r-valid tuples, organized by tuple length.

    For ``l >= r - 1`` every semi-valid tuple is r-valid and the consecutive
    tuple of the shortest such length is optimal among them.  For ``r = 3``
    the short candidate ``(v_0, v_{n-2}, v_2)`` covers ``l = 1``.  For
    ``r >= 4`` the lengths ``l < r - 1`` are searched over gap vectors:
    exhaustively when there are at most ``search_limit`` rotation classes,
    otherwise by r-valid local search from random starts.
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    if n < 2 * r:
        raise ValueError(f"n={n} is below 2r={2 * r}")
    details: dict = {}
    if r == 2:
        C = consecutive_tuple(n, 1)
        return StructuralReport(n, r, count_H_of_C(n, r, C), C, True, {"rule": "every tuple gives n edges"})
    if r == 3:
        c1, c2 = short_tuple(n), two_step_tuple(n)
        s1, s2 = count_H_of_C(n, 3, c1), count_H_of_C(n, 3, c2)
        details = {"short": s1, "two_step": s2}
        value, C = (s2, c2) if s2 <= s1 else (s1, c1)
        return StructuralReport(n, r, value, C, True, details)
    C = consecutive_tuple(n, r - 1)
    best = (count_H_of_C(n, r, C), C)
    details[f"L={2 * r - 1}"] = {"value": best[0], "method": "consecutive"}
    exhaustive = True
    rng = random.Random(seed)
    for ell in range(1, r - 1):
        L = 2 * ell + 1
        if binom(n - 1, L - 1) // L <= search_limit:
            cand = None
            for g in r_valid_gap_classes(n, r, L):
                T = tuple_from_gaps(n, g)
                s = count_H_of_C(n, r, T)
                if cand is None or s < cand[0]:
                    cand = (s, T)
            method = "exhaustive"
        else:
            exhaustive = False
            cand = _local_search(n, r, L, rng, restarts=20)
            method = "local search"
        if cand is None:
            details[f"L={L}"] = {"value": None, "method": method}
            continue
        details[f"L={L}"] = {"value": cand[0], "method": method}
        if cand[0] < best[0]:
            best = cand
    return StructuralReport(n, r, best[0], best[1], exhaustive, details)


def _local_search(n: int, r: int, L: int, rng: random.Random, restarts: int):
    best = None
    for _ in range(restarts):
        for _attempt in range(200):
            cuts = sorted(rng.sample(range(1, n), L - 1))
            gaps = [b - a for a, b in zip([0] + cuts, cuts + [n])]
            if gaps_r_valid(gaps, r):
                break
        else:
            continue
        size = count_H_of_C(n, r, tuple_from_gaps(n, gaps))
        improved = True
        while improved:
            improved = False
            for a in range(L):
                for b in range(L):
                    if a == b or gaps[a] <= 1:
                        continue
                    g = list(gaps)
                    g[a] -= 1
                    g[b] += 1
                    if not gaps_r_valid(g, r):
                        continue
                    s = count_H_of_C(n, r, tuple_from_gaps(n, g))
                    if s < size:
                        gaps, size, improved = g, s, True
        if best is None or size < best[0]:
            best = (size, tuple_from_gaps(n, gaps))
    return best


def structural_sat(n: int, r: int) -> int:
    return structural_sat_report(n, r).value


def thm_formula(n: int) -> int:
    """``C(n-1, 2) + 3n - 11``."""
    return comb(n - 1, 2) + 3 * n - 11


# ---------------------------------------------------------------------------
# structure-theorem verification
# ---------------------------------------------------------------------------


def random_free_seed(n: int, F: Pattern, rng: random.Random, max_edges: int | None = None) -> Cgh:
    """Random F-free family grown greedily from shuffled r-sets."""
    r = F.r
    pool = list(combinations(range(n), r))
    rng.shuffle(pool)
    target = rng.randint(0, max_edges if max_edges is not None else max(1, len(pool) // 4))
    chosen: list[Edge] = []
    for e in pool:
        if len(chosen) >= target:
            break
        if all(not forms(n, e, f, F) for f in chosen):
            chosen.append(e)
    return Cgh(n, r, frozenset(chosen))


@dataclass
class StructureReport:
    n: int
    r: int
    tuples_checked: int = 0
    closures_checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "tuples_checked": self.tuples_checked,
            "closures_checked": self.closures_checked,
            "failures": self.failures[:20],
            "ok": self.ok,
        }


def check_saturated_family(H: Cgh, properties: bool = True) -> list[str]:
    """Property checks plus tuple round trip for one saturated family."""
    fails = []
    lr = lambda_rho(H)
    if properties:
        fails += ["basic " + f for f in check_basic_properties(H, lr)]
        fails += ["relative " + f for f in check_relative_properties(H, lr)]
    try:
        C = extract_tuple(H, lr)
    except ExtractionError as exc:
        return fails + [f"extraction: {exc}"]
    if build_H_of_C(H.n, H.r, C).edges != H.edges:
        fails.append(f"round trip: H(C) != H for C={C}")
    return fails


def verify_structure_theorem(
    n: int, r: int, trials: int = 100, seed: int = 0, enumerate_tuples: bool | None = None, properties: bool = True
) -> StructureReport:
    """Both directions of the characterization at one ``(n, r)``.

    r-valid tuples give saturated families whose extracted tuple reproduces
    them; closures of random free seeds are of the form ``H(C)``.
    """
    if n < 2 * r:
        raise ValueError(f"n={n} is below 2r={2 * r}")
    F = M1r(r)
    rep = StructureReport(n, r)
    if enumerate_tuples is None:
        enumerate_tuples = n <= 10
    if enumerate_tuples:
        seen = set()
        for C in r_valid_tuples(n, r):
            H = build_H_of_C(n, r, C)
            if H.edges in seen:
                continue
            seen.add(H.edges)
            rep.tuples_checked += 1
            if not is_saturated(H, F):
                rep.failures.append(f"H({C}) is not saturated")
                continue
            rep.failures += [f"H({C}): {f}" for f in check_saturated_family(H, properties)]
    rng = random.Random(seed)
    for _ in range(trials):
        seed_family = random_free_seed(n, F, rng)
        H = closure(seed_family, F)
        rep.closures_checked += 1
        rep.failures += [f"closure: {f}" for f in check_saturated_family(H, properties)]
    return rep
