"""Two-edge configurations and the pair classifier.

Every pattern here has exactly two edges, so whether a pair of edges forms a
given pattern depends only on how the two edges sit on the circle.  The shape
statistic used throughout is the cyclic sequence of membership labels: ``A``
for the first edge only, ``B`` for the second only, ``S`` for shared vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .cyclic import Cgh, Edge, colex_subsets

R2_TAGS = ("G0", "G1", "G2")
R3_TAGS = ("M1", "M2", "M3", "S1", "S2", "S3", "D1", "D2")
TAGS = R2_TAGS + R3_TAGS + ("M1r",)


@dataclass(frozen=True)
class Pattern:
    """A named two-edge cgh.  ``M1r`` carries its own uniformity.

    ``M1r`` with ``r == 2`` or ``r == 3`` is normalized to ``G2`` / ``M1`` so
    that aliases compare equal and share one classifier.
    """

    tag: str
    r: int = 0

    def __post_init__(self) -> None:
        if self.tag not in TAGS:
            raise ValueError(f"unknown pattern tag {self.tag!r}")
        if self.tag == "M1r":
            if self.r < 2:
                raise ValueError("M1r needs a uniformity r >= 2")
            if self.r == 2:
                object.__setattr__(self, "tag", "G2")
            elif self.r == 3:
                object.__setattr__(self, "tag", "M1")
        elif self.tag in R2_TAGS:
            object.__setattr__(self, "r", 2)
        else:
            object.__setattr__(self, "r", 3)

    @classmethod
    def parse(cls, text: str) -> "Pattern":
        text = text.strip()
        if text.startswith("M1r"):
            _, _, arg = text.partition(":")
            if not arg:
                arg = text[3:].strip("()")
            try:
                return cls("M1r", int(arg))
            except ValueError:
                raise ValueError(f"cannot parse pattern {text!r}; expected e.g. 'M1r:4'") from None
        return cls(text)

    def __str__(self) -> str:
        return f"M1r:{self.r}" if self.tag == "M1r" else self.tag

    @property
    def shared(self) -> int:
        """Number of vertices the two edges of the pattern share."""
        if self.tag in ("G0", "S1", "S2", "S3"):
            return 1
        if self.tag in ("D1", "D2"):
            return 2
        return 0


def M1r(r: int) -> Pattern:
    return Pattern("M1r", r)


ALL_R3 = tuple(Pattern(t) for t in R3_TAGS)
ALL_R2 = tuple(Pattern(t) for t in R2_TAGS)


@dataclass(frozen=True)
class PairShape:
    """Rotation-invariant description of how two edges sit on the circle.

    ``alternations`` counts the maximal ``A``/``B`` blocks around the circle
    with shared vertices deleted.  ``reading`` is the ``A``/``B`` word read
    clockwise starting just after the first shared vertex (empty when the
    edges are disjoint); for two shared vertices ``reading`` is ``"same"`` or
    ``"opposite"`` according to whether the odd vertices lie on one arc of the
    shared pair.
    """

    shared: int
    alternations: int
    reading: str


def pair_shape(n: int, e: Edge, f: Edge) -> PairShape:
    se, sf = set(e), set(f)
    if len(se) != len(e) or len(sf) != len(f):
        raise ValueError("edges must consist of distinct vertices")
    if se == sf:
        raise ValueError(f"cannot classify an edge against itself: {tuple(sorted(e))}")
    if len(se) != len(sf):
        raise ValueError("edges of different sizes")
    shared = se & sf
    labels = []
    for v in range(n):
        if v in shared:
            labels.append("S")
        elif v in se:
            labels.append("A")
        elif v in sf:
            labels.append("B")
    ab = [c for c in labels if c != "S"]
    alternations = sum(1 for t in range(len(ab)) if ab[t] != ab[t - 1])
    if not shared:
        return PairShape(0, alternations, "")
    first = labels.index("S")
    word = "".join(labels[first + 1:] + labels[:first])
    if len(shared) == 2:
        odd_a, odd_b = (se - shared), (sf - shared)
        second = word.index("S")
        if len(odd_a) == 1 and len(odd_b) == 1:
            # word = (arc after first shared) S (arc after second shared)
            arc1 = word[:second]
            side = "same" if ("A" in arc1) == ("B" in arc1) else "opposite"
            return PairShape(2, alternations, side)
    return PairShape(len(shared), alternations, word.replace("S", ""))


_S_READINGS = {"AABB": "S1", "BBAA": "S1", "ABBA": "S2", "BAAB": "S2", "ABAB": "S3", "BABA": "S3"}


def classify_pair(n: int, e: Edge, f: Edge) -> Pattern | None:
    """Name the two-edge configuration formed by ``e`` and ``f`` (or ``None``)."""
    shape = pair_shape(n, e, f)
    r = len(e)
    if r == 2:
        if shape.shared == 1:
            return Pattern("G0")
        return Pattern("G1") if shape.alternations == 4 else Pattern("G2")
    if r == 3:
        if shape.shared == 0:
            return Pattern(("M1", "M2", "M3")[shape.alternations // 2 - 1])
        if shape.shared == 1:
            return Pattern(_S_READINGS[shape.reading])
        return Pattern("D2") if shape.reading == "same" else Pattern("D1")
    if shape.shared == 0 and shape.alternations == 2:
        return M1r(r)
    return None


def forms(n: int, e: Edge, f: Edge, F: Pattern) -> bool:
    if len(e) != F.r or len(set(e) & set(f)) != F.shared:
        return False
    return classify_pair(n, e, f) == F


_EMBEDDINGS: dict[str, tuple[int, tuple[Edge, Edge]]] = {
    "G0": (3, ((0, 1), (0, 2))),
    "G1": (4, ((0, 2), (1, 3))),
    "G2": (4, ((0, 1), (2, 3))),
    "M1": (6, ((0, 1, 2), (3, 4, 5))),
    "M2": (6, ((0, 1, 3), (2, 4, 5))),
    "M3": (6, ((0, 2, 4), (1, 3, 5))),
    "S1": (5, ((0, 1, 2), (0, 3, 4))),
    "S2": (5, ((0, 2, 3), (0, 1, 4))),
    "S3": (5, ((0, 1, 3), (0, 2, 4))),
    "D1": (4, ((0, 1, 2), (0, 2, 3))),
    "D2": (4, ((0, 1, 3), (0, 2, 3))),
}


def canonical_embedding(F: Pattern) -> Cgh:
    """Smallest two-edge cgh realizing ``F``."""
    if F.tag == "M1r":
        r = F.r
        return Cgh.from_edges(2 * r, [range(r), range(r, 2 * r)])
    n, edges = _EMBEDDINGS[F.tag]
    return Cgh.from_edges(n, edges)


def min_vertices(F: Pattern) -> int:
    return canonical_embedding(F).n


# ---------------------------------------------------------------------------
# conflict graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ConflictGraph:
    """Graph on all r-subsets (colex order); adjacency means "forms F".

    ``adj[i]`` is a bitmask over vertex ranks.  F-free families are the
    independent sets and F-saturated families the maximal ones.
    """

    n: int
    r: int
    pattern: Pattern
    vertices: tuple[Edge, ...]
    index: dict[Edge, int]
    adj: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def degree(self, i: int) -> int:
        return self.adj[i].bit_count()

    def neighbors(self, i: int) -> list[int]:
        m, out = self.adj[i], []
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return out

    def num_edges(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def mask_of(self, edges) -> int:
        m = 0
        for e in edges:
            m |= 1 << self.index[tuple(sorted(e))]
        return m

    def edges_of(self, mask: int) -> list[Edge]:
        out = []
        while mask:
            low = mask & -mask
            out.append(self.vertices[low.bit_length() - 1])
            mask ^= low
        return out

    def cgh_of(self, mask: int) -> Cgh:
        return Cgh(self.n, self.r, frozenset(self.edges_of(mask)))


def _partners(n: int, e: Edge, shared: int):
    """All r-sets meeting ``e`` in exactly ``shared`` vertices."""
    rest = [v for v in range(n) if v not in e]
    r = len(e)
    for keep in combinations(e, shared):
        for extra in combinations(rest, r - shared):
            yield tuple(sorted(keep + extra))


@lru_cache(maxsize=64)
def conflict_graph(n: int, F: Pattern) -> ConflictGraph:
    r = F.r
    if n < r:
        raise ValueError(f"n={n} is smaller than the uniformity {r}")
    verts = tuple(colex_subsets(n, r))
    index = {e: i for i, e in enumerate(verts)}
    adj = [0] * len(verts)
    for i, e in enumerate(verts):
        for f in _partners(n, e, F.shared):
            j = index[f]
            if j > i and classify_pair(n, e, f) == F:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return ConflictGraph(n, r, F, verts, index, tuple(adj))


def pattern_degree(n: int, e: Edge, F: Pattern) -> int:
    """Number of r-sets forming ``F`` together with ``e``."""
    e = tuple(sorted(e))
    return sum(1 for f in _partners(n, e, F.shared) if classify_pair(n, e, f) == F)
