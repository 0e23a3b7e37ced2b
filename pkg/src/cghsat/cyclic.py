"""Cyclic-order primitives and the convex geometric hypergraph container.

Vertices are the integers ``0..n-1`` arranged clockwise on a circle.  The raw
integer order is used only for canonical storage; every geometric predicate
goes through cyclic betweenness.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Sequence

Edge = tuple[int, ...]


# ---------------------------------------------------------------------------
# arcs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Arc:
    """A cyclic interval from ``start`` clockwise to ``end``."""

    start: int
    end: int
    closed_start: bool = True
    closed_end: bool = True

    def members(self, n: int) -> frozenset[int]:
        return arc_members(n, self)


def closed(a: int, b: int) -> Arc:
    return Arc(a, b, True, True)


def open_(a: int, b: int) -> Arc:
    return Arc(a, b, False, False)


def arc_members(n: int, arc: Arc) -> frozenset[int]:
    """Vertices of ``arc`` walking clockwise from ``arc.start`` to ``arc.end``.

    ``[a, a]`` is the singleton ``{a}``; an open arc with equal endpoints is
    rejected because the cyclic definition does not single out a set.
    """
    a, b = arc.start, arc.end
    if not (0 <= a < n and 0 <= b < n):
        raise ValueError(f"arc endpoints {a}, {b} out of range for n={n}")
    if a == b:
        if arc.closed_start and arc.closed_end:
            return frozenset({a})
        raise ValueError(f"ill-formed arc with equal endpoints {a} and an open side")
    span = (b - a) % n
    out = {(a + t) % n for t in range(1, span)}
    if arc.closed_start:
        out.add(a)
    if arc.closed_end:
        out.add(b)
    return frozenset(out)


def closed_arc_size(n: int, a: int, b: int) -> int:
    """``|[v_a, v_b]|``."""
    return (b - a) % n + 1


def open_arc_size(n: int, a: int, b: int) -> int:
    """``|(v_a, v_b)|`` for ``a != b``."""
    if a % n == b % n:
        raise ValueError("open arc with equal endpoints")
    return (b - a) % n - 1


def closed_arc_mask(n: int, a: int, b: int) -> int:
    """Bitmask of ``[v_a, v_b]``."""
    mask = 0
    for t in range((b - a) % n + 1):
        mask |= 1 << ((a + t) % n)
    return mask


def in_closed_arc(n: int, x: int, a: int, b: int) -> bool:
    return (x - a) % n <= (b - a) % n


def in_open_arc(n: int, x: int, a: int, b: int) -> bool:
    d = (x - a) % n
    return 0 < d < (b - a) % n


# ---------------------------------------------------------------------------
# colex ranking of r-subsets
# ---------------------------------------------------------------------------


def colex_rank(edge: Sequence[int]) -> int:
    return sum(comb(c, i + 1) for i, c in enumerate(sorted(edge)))


def colex_unrank(rank: int, r: int) -> Edge:
    out = []
    for i in range(r, 0, -1):
        c = i - 1
        while comb(c + 1, i) <= rank:
            c += 1
        out.append(c)
        rank -= comb(c, i)
    return tuple(sorted(out))


def colex_subsets(n: int, r: int) -> list[Edge]:
    """All r-subsets of ``range(n)``, index-sorted, in colex rank order."""
    return sorted(combinations(range(n), r), key=lambda e: e[::-1])


# ---------------------------------------------------------------------------
# the hypergraph container
# ---------------------------------------------------------------------------


def _norm_edge(vertices: Iterable[int]) -> Edge:
    return tuple(sorted(vertices))


@dataclass(frozen=True)
class Cgh:
    """An r-uniform edge family on ``n`` cyclically ordered vertices."""

    n: int
    r: int
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.r < 2:
            raise ValueError("uniformity must be at least 2")
        normed = frozenset(_norm_edge(e) for e in self.edges)
        for e in normed:
            if len(e) != self.r or len(set(e)) != self.r:
                raise ValueError(f"edge {e} is not a set of {self.r} distinct vertices")
            if e[0] < 0 or e[-1] >= self.n:
                raise ValueError(f"edge {e} has a vertex outside [0, {self.n})")
        object.__setattr__(self, "edges", normed)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]], r: int | None = None) -> "Cgh":
        edges = [_norm_edge(e) for e in edges]
        if r is None:
            if not edges:
                raise ValueError("cannot infer r from an empty edge list")
            r = len(edges[0])
        return cls(n, r, frozenset(edges))

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.sorted_edges())

    def __contains__(self, e: object) -> bool:
        if not isinstance(e, (tuple, list, set, frozenset)):
            return False
        return _norm_edge(e) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg

    def vertex_cover(self) -> set[int]:
        return {v for e in self.edges for v in e}

    def with_edges(self, edges: Iterable[Iterable[int]]) -> "Cgh":
        return Cgh(self.n, self.r, self.edges | {_norm_edge(e) for e in edges})

    def union(self, other: "Cgh") -> "Cgh":
        if (self.n, self.r) != (other.n, other.r):
            raise ValueError("union of cgh's with different n or r")
        return Cgh(self.n, self.r, self.edges | other.edges)

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {"n": self.n, "r": self.r, "edges": [list(e) for e in self.sorted_edges()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "Cgh":
        return cls(int(d["n"]), int(d["r"]), frozenset(_norm_edge(e) for e in d["edges"]))

    @classmethod
    def from_json(cls, s: str) -> "Cgh":
        return cls.from_dict(json.loads(s))


def complete(n: int, r: int) -> Cgh:
    return Cgh(n, r, frozenset(combinations(range(n), r)))


# ---------------------------------------------------------------------------
# symmetry
# ---------------------------------------------------------------------------


def rotate(H: Cgh, s: int) -> Cgh:
    n = H.n
    return Cgh(n, H.r, frozenset(_norm_edge((v + s) % n for v in e) for e in H.edges))


def reflect(H: Cgh) -> Cgh:
    """Mirror image ``v_i -> v_{-i}``.  Not an isomorphism of cgh's."""
    n = H.n
    return Cgh(n, H.r, frozenset(_norm_edge((-v) % n for v in e) for e in H.edges))


def _encoding(edges: Iterable[Edge]) -> list[Edge]:
    return sorted(edges)


def canonical_form(H: Cgh) -> Cgh:
    """Rotation of ``H`` whose sorted edge list is lexicographically least."""
    best = None
    best_key = None
    for s in range(H.n):
        rotated = rotate(H, s)
        key = _encoding(rotated.edges)
        if best_key is None or key < best_key:
            best, best_key = rotated, key
    assert best is not None
    return best


def is_isomorphic(H1: Cgh, H2: Cgh) -> bool:
    if (H1.n, H1.r) != (H2.n, H2.r) or len(H1) != len(H2):
        return False
    return canonical_form(H1).edges == canonical_form(H2).edges


def edge_mask(e: Iterable[int]) -> int:
    m = 0
    for v in e:
        m |= 1 << v
    return m
