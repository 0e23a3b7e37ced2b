"""F-freeness, F-saturation, closure, and exact sat/ex at small n.

Everything reduces to the conflict graph of ``F``: free families are its
independent sets, saturated families its maximal independent sets, so
``sat(n, F)`` is the minimum independent dominating set size and ``ex(n, F)``
the independence number.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .cyclic import Cgh, Edge, canonical_form
from .patterns import ConflictGraph, Pattern, classify_pair, conflict_graph, forms

log = logging.getLogger(__name__)


class NotFreeError(ValueError):
    """Raised when a family expected to be F-free contains a copy of F."""

    def __init__(self, pair: tuple[Edge, Edge], pattern: Pattern):
        self.pair = pair
        self.pattern = pattern
        super().__init__(f"edges {pair[0]} and {pair[1]} form {pattern}")


def _check_uniformity(H: Cgh, F: Pattern) -> None:
    if H.r != F.r:
        raise ValueError(f"uniformity mismatch: cgh has r={H.r}, pattern {F} has r={F.r}")


def find_copy(H: Cgh, F: Pattern) -> tuple[Edge, Edge] | None:
    """Some pair of edges of ``H`` forming ``F``, if one exists."""
    _check_uniformity(H, F)
    edges = H.sorted_edges()
    for e, f in combinations(edges, 2):
        if forms(H.n, e, f, F):
            return (e, f)
    return None


def is_free(H: Cgh, F: Pattern) -> bool:
    return find_copy(H, F) is None


def blocked_mask(G: ConflictGraph, family_mask: int) -> int:
    out = 0
    m = family_mask
    while m:
        low = m & -m
        out |= G.adj[low.bit_length() - 1]
        m ^= low
    return out


def addable(H: Cgh, F: Pattern) -> list[Edge]:
    """Non-edges that can be added to ``H`` without creating ``F``."""
    G = conflict_graph(H.n, F)
    fam = G.mask_of(H.edges)
    free = ((1 << len(G)) - 1) & ~fam & ~blocked_mask(G, fam)
    return G.edges_of(free)


def is_saturated(H: Cgh, F: Pattern) -> bool:
    """F-free and every non-edge creates a copy of F."""
    _check_uniformity(H, F)
    G = conflict_graph(H.n, F)
    fam = G.mask_of(H.edges)
    blocked = blocked_mask(G, fam)
    if blocked & fam:
        return False
    full = (1 << len(G)) - 1
    return (fam | blocked) == full


def closure(H: Cgh, F: Pattern) -> Cgh:
    """Deterministic F-saturated superset of ``H``.

    Non-edges are visited in colex rank order and kept whenever they do not
    form ``F`` with the current family.  Conflicts only accumulate, so one
    pass is enough.
    """
    _check_uniformity(H, F)
    pair = find_copy(H, F)
    if pair is not None:
        raise NotFreeError(pair, F)
    G = conflict_graph(H.n, F)
    fam = G.mask_of(H.edges)
    blocked = blocked_mask(G, fam)
    for i in range(len(G)):
        bit = 1 << i
        if not (fam | blocked) & bit:
            fam |= bit
            blocked |= G.adj[i]
    return G.cgh_of(fam)


# ---------------------------------------------------------------------------
# exact search
# ---------------------------------------------------------------------------


@dataclass
class SolveReport:
    """Result of an exact (or budget-truncated) extremal search."""

    n: int
    pattern: Pattern
    value: int
    witnesses: list[Cgh]
    nodes_explored: int
    exhaustive: bool
    kind: str = "sat"

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "F": str(self.pattern),
            "kind": self.kind,
            "value": self.value,
            "exhaustive": self.exhaustive,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "nodes": self.nodes_explored,
        }


class _BudgetExhausted(Exception):
    pass


def _bits(m: int):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


class _DominationSearch:
    """Branch and bound over independent dominating sets.

    State: ``undom`` (vertices not yet dominated) and ``banned`` (undominated
    vertices excluded from selection by earlier sibling branches).  The branch
    vertex is the undominated vertex with the fewest selectable dominators; a
    branch per selectable dominator, each sibling banning its predecessors, so
    every independent dominating set is reached exactly once.
    """

    def __init__(self, G: ConflictGraph, budget: int | None):
        self.G = G
        self.closed = tuple(a | (1 << i) for i, a in enumerate(G.adj))
        self.budget = budget
        self.nodes = 0
        self.best = None  # type: int | None
        self.best_mask = 0
        self.mode = "min"
        self.target = None  # type: int | None
        self.found: list[int] = []

    def _tick(self) -> None:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise _BudgetExhausted

    def _lower_bound(self, undom: int, allowed: int) -> int:
        need = undom.bit_count()
        if need == 0:
            return 0
        closed = self.closed
        covers = sorted(((closed[w] & undom).bit_count() for w in _bits(allowed)), reverse=True)
        total = 0
        for t, c in enumerate(covers, 1):
            total += c
            if total >= need:
                return t
        return len(covers) + 1

    def _branch_vertex(self, undom: int, allowed: int):
        closed = self.closed
        best_u, best_c, best_cnt = -1, 0, None
        for u in _bits(undom):
            c = closed[u] & allowed
            cnt = c.bit_count()
            if best_cnt is None or cnt < best_cnt:
                best_u, best_c, best_cnt = u, c, cnt
                if cnt <= 1:
                    break
        return best_u, best_c

    def root_branches(self, undom: int, banned: int = 0) -> list[tuple[int, int, int]]:
        allowed = undom & ~banned
        _, cands = self._branch_vertex(undom, allowed)
        out = []
        for w in _bits(cands):
            rest = undom & ~self.closed[w]
            out.append((w, rest, banned & rest))
            banned |= 1 << w
        return out

    def run(self, undom: int, banned: int, chosen: int, size: int) -> None:
        self._tick()
        if undom == 0:
            self._record(chosen, size)
            return
        allowed = undom & ~banned
        u, cands = self._branch_vertex(undom, allowed)
        if not cands:
            return
        lb = self._lower_bound(undom, allowed)
        if self.mode == "min":
            if self.best is not None and size + lb >= self.best:
                return
        elif self.mode == "enum" and self.target is not None and size + lb > self.target:
            return
        for w in _bits(cands):
            rest = undom & ~self.closed[w]
            self.run(rest, banned & rest, chosen | (1 << w), size + 1)
            banned |= 1 << w
            if self.mode == "min" and self.best is not None and size + 1 >= self.best:
                return

    def _record(self, chosen: int, size: int) -> None:
        if self.mode == "min":
            if self.best is None or size < self.best:
                self.best, self.best_mask = size, chosen
        elif self.target is None or size == self.target:
            self.found.append(chosen)


def _initial_incumbent(G: ConflictGraph) -> int:
    fam = 0
    blocked = 0
    for i in range(len(G)):
        bit = 1 << i
        if not (fam | blocked) & bit:
            fam |= bit
            blocked |= G.adj[i]
    return fam


def _solve_subtree(args):
    n, F, w, rest, banned, incumbent, budget = args
    G = conflict_graph(n, F)
    s = _DominationSearch(G, budget)
    s.best = incumbent
    try:
        s.run(rest, banned, 1 << w, 1)
        exhaustive = True
    except _BudgetExhausted:
        exhaustive = False
    improved = s.best is not None and s.best < incumbent
    return (s.best if improved else None, s.best_mask if improved else 0, s.nodes, exhaustive)


def _threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("CGH_SAT_THREADS", "1") or 1)
    return max(1, threads)


def sat_exact(n: int, F: Pattern, budget: int | None = None, threads: int | None = None) -> SolveReport:
    """Minimum size of an F-saturated cgh on ``n`` points.

    The incumbent starts at the colex closure of the empty family; the search
    only accepts strict improvements, so the reported witness is the first
    optimum in branch order (or the closure when nothing beats it).  With
    ``threads > 1`` the root branches run in separate processes and the result
    is reduced in branch order, giving the same value and witness.
    """
    G = conflict_graph(n, F)
    full = (1 << len(G)) - 1
    seed = _initial_incumbent(G)
    best_val, best_mask = seed.bit_count(), seed
    workers = _threads(threads)
    if workers == 1:
        s = _DominationSearch(G, budget)
        s.best, s.best_mask = best_val, best_mask
        try:
            s.run(full, 0, 0, 0)
            exhaustive = True
        except _BudgetExhausted:
            exhaustive = False
        best_val, best_mask, nodes = s.best, s.best_mask, s.nodes
    else:
        probe = _DominationSearch(G, None)
        branches = probe.root_branches(full)
        jobs = [(n, F, w, rest, banned, best_val, budget) for w, rest, banned in branches]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_solve_subtree, jobs))
        nodes = 1 + sum(r[2] for r in results)
        exhaustive = all(r[3] for r in results)
        for val, mask, _, _ in results:
            if val is not None and val < best_val:
                best_val, best_mask = val, mask
    witness = canonical_form(G.cgh_of(best_mask))
    log.debug("sat_exact n=%d F=%s value=%d nodes=%d", n, F, best_val, nodes)
    return SolveReport(n, F, best_val, [witness], nodes, exhaustive)


def _canonical_sorted(G: ConflictGraph, masks) -> list[Cgh]:
    seen = {}
    for m in masks:
        c = canonical_form(G.cgh_of(m))
        seen.setdefault(c.edges, c)
    return [seen[k] for k in sorted(seen, key=sorted)]


def enumerate_minimum_saturated(
    n: int, F: Pattern, budget: int | None = None, value: int | None = None
) -> list[Cgh]:
    """All minimum F-saturated cghs on ``n`` points, one per rotation class."""
    if value is None:
        rep = sat_exact(n, F, budget=budget)
        if not rep.exhaustive:
            raise RuntimeError(f"sat_exact({n}, {F}) did not finish within the budget")
        value = rep.value
    G = conflict_graph(n, F)
    s = _DominationSearch(G, budget)
    s.mode, s.target = "enum", value
    try:
        s.run((1 << len(G)) - 1, 0, 0, 0)
    except _BudgetExhausted:
        raise RuntimeError("enumeration did not finish within the budget") from None
    return _canonical_sorted(G, s.found)


def enumerate_saturated(n: int, F: Pattern, budget: int | None = None) -> list[Cgh]:
    """Every F-saturated cgh on ``n`` points (not reduced by rotation)."""
    G = conflict_graph(n, F)
    s = _DominationSearch(G, budget)
    s.mode = "all"
    try:
        s.run((1 << len(G)) - 1, 0, 0, 0)
    except _BudgetExhausted:
        raise RuntimeError("enumeration did not finish within the budget") from None
    return [G.cgh_of(m) for m in s.found]


# ---------------------------------------------------------------------------
# maximum independent set (ex)
# ---------------------------------------------------------------------------


def _clique_cover_bound(adj, cand: int) -> int:
    count = 0
    while cand:
        v = (cand & -cand).bit_length() - 1
        clique_cand = cand & adj[v]
        cand &= ~(1 << v)
        while clique_cand:
            u = (clique_cand & -clique_cand).bit_length() - 1
            cand &= ~(1 << u)
            clique_cand &= adj[u]
        count += 1
    return count


def ex_exact(n: int, F: Pattern, budget: int | None = None) -> SolveReport:
    """Maximum size of an F-free cgh on ``n`` points."""
    G = conflict_graph(n, F)
    adj = G.adj
    best = [0, 0]
    nodes = [0]

    def go(cand: int, chosen: int, size: int) -> None:
        nodes[0] += 1
        if budget is not None and nodes[0] > budget:
            raise _BudgetExhausted
        # vertices with at most one neighbour among the candidates can always be taken
        changed = True
        while changed and cand:
            changed = False
            for v in _bits(cand):
                if cand >> v & 1 and (adj[v] & cand).bit_count() <= 1:
                    chosen |= 1 << v
                    size += 1
                    cand &= ~(adj[v] | (1 << v))
                    changed = True
        if not cand:
            if size > best[0]:
                best[0], best[1] = size, chosen
            return
        if size + _clique_cover_bound(adj, cand) <= best[0]:
            return
        v = max(_bits(cand), key=lambda x: ((adj[x] & cand).bit_count(), -x))
        go(cand & ~(adj[v] | (1 << v)), chosen | (1 << v), size + 1)
        go(cand & ~(1 << v), chosen, size)

    try:
        go((1 << len(G)) - 1, 0, 0)
        exhaustive = True
    except _BudgetExhausted:
        exhaustive = False
    witness = canonical_form(G.cgh_of(best[1]))
    return SolveReport(n, F, best[0], [witness], nodes[0], exhaustive, kind="ex")


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------


def weight_profile(H: Cgh) -> dict[Edge, Fraction]:
    """``wt(h) = sum over v in h of 1/d_H(v)`` for every edge of a 3-cgh.

    The weights sum to the number of covered vertices.
    """
    if H.r != 3:
        raise ValueError("weights are defined for 3-uniform families")
    deg = H.degrees()
    return {h: sum((Fraction(1, deg[v]) for v in h), Fraction(0)) for h in H.sorted_edges()}


def satisfies_weight_hypothesis(H: Cgh) -> bool:
    """Every vertex covered and every edge has a vertex of degree at least two."""
    deg = H.degrees()
    if any(d == 0 for d in deg):
        return False
    return all(any(deg[v] >= 2 for v in h) for h in H.edges)


def pairs_forming(H: Cgh, e: Edge, F: Pattern) -> list[Edge]:
    """Edges of ``H`` that form ``F`` together with ``e``."""
    e = tuple(sorted(e))
    return [h for h in H.sorted_edges() if h != e and classify_pair(H.n, e, h) == F]
