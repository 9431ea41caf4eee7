"""Combinatorial descriptions of central arrangements.

A :class:`LineCombinatorics` records the rank-2 flats of an arrangement: the
maximal sets of hyperplanes through a common codimension-2 subspace.  Flats of
size two are implicit.  A :class:`Matroid` carries the full circuit list,
which is what the Orlik-Solomon ideal needs in every degree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import networkx as nx


class CombinatoricsError(ValueError):
    """Invalid combinatorial input."""


Flat = tuple[int, ...]


# --------------------------------------------------------------------------
# line combinatorics


@dataclass(frozen=True)
class LineCombinatorics:
    """Hyperplane count plus the rank-2 flats of size at least three.

    Construct through :meth:`build`, which validates and canonicalizes; the
    size-2 flats are implied by the pairs no multiple flat covers.
    """

    n: int
    flats: tuple[Flat, ...]

    @classmethod
    def build(cls, n: int, flats: Sequence[Sequence[int]] = ()) -> "LineCombinatorics":
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise CombinatoricsError(f"hyperplane count must be a nonnegative integer, got {n!r}")
        seen: dict[tuple[int, int], Flat] = {}
        multiple = []
        for raw in flats:
            flat = tuple(raw)
            if any(not isinstance(i, int) or isinstance(i, bool) for i in flat):
                raise CombinatoricsError(f"flat {list(raw)} has non-integer entries")
            if len(set(flat)) != len(flat):
                raise CombinatoricsError(f"flat {list(raw)} repeats an index")
            if len(flat) < 2:
                raise CombinatoricsError(f"flat {list(raw)} has fewer than 2 elements")
            if any(i < 0 or i >= n for i in flat):
                raise CombinatoricsError(f"flat {list(raw)} has an index outside 0..{n - 1}")
            flat = tuple(sorted(flat))
            for pair in itertools.combinations(flat, 2):
                if pair in seen:
                    raise CombinatoricsError(
                        f"flats {list(seen[pair])} and {list(flat)} share the pair {list(pair)}")
                seen[pair] = flat
            if len(flat) >= 3:
                multiple.append(flat)
        return cls(n, tuple(sorted(multiple)))

    def __post_init__(self):
        # cheap structural check for direct construction
        if list(self.flats) != sorted(self.flats) or any(len(f) < 3 for f in self.flats):
            raise CombinatoricsError("use LineCombinatorics.build for unsorted or small flats")

    @property
    def doubles(self) -> tuple[Flat, ...]:
        covered = {p for f in self.flats for p in itertools.combinations(f, 2)}
        return tuple(p for p in itertools.combinations(range(self.n), 2) if p not in covered)

    @property
    def all_flats(self) -> tuple[Flat, ...]:
        """Every rank-2 flat, multiple ones and implicit doubles, sorted."""
        return tuple(sorted(self.flats + self.doubles))

    def flat_of(self, i: int, j: int) -> Flat:
        """The unique flat containing the pair ``{i, j}``."""
        if i == j:
            raise CombinatoricsError("a flat is determined by two distinct hyperplanes")
        for f in self.flats:
            if i in f and j in f:
                return f
        return (min(i, j), max(i, j))

    def is_pencil(self) -> bool:
        return self.n >= 3 and self.flats == (tuple(range(self.n)),)

    def is_near_pencil(self) -> bool:
        """All but one hyperplane share a flat (and the rest is generic)."""
        return (self.n >= 4 and len(self.flats) == 1
                and len(self.flats[0]) == self.n - 1)

    def relabel(self, perm: Sequence[int]) -> "LineCombinatorics":
        """Image under ``i -> perm[i]``."""
        if sorted(perm) != list(range(self.n)):
            raise CombinatoricsError("relabeling must be a permutation of 0..n-1")
        return LineCombinatorics.build(self.n, [[perm[i] for i in f] for f in self.flats])


def mobius(lc: LineCombinatorics, flat: Sequence[int]) -> int:
    """Möbius value of a rank-2 flat, ``|flat| - 1``."""
    key = tuple(sorted(flat))
    if len(key) == 2:
        if key[0] != key[1] and 0 <= key[0] and key[1] < lc.n and lc.flat_of(*key) == key:
            return 1
    elif key in lc.flats:
        return len(key) - 1
    raise CombinatoricsError(f"{list(flat)} is not a rank-2 flat")


# --------------------------------------------------------------------------
# matroids


@dataclass(frozen=True)
class Matroid:
    """A matroid given by rank and circuits, with ground set ``0..n-1``."""

    n: int
    rank: int
    circuits: tuple[Flat, ...]

    @classmethod
    def build(cls, n: int, rank: int, circuits) -> "Matroid":
        cs = sorted({tuple(sorted(c)) for c in circuits}, key=lambda c: (len(c), c))
        return cls(n, rank, tuple(cs))

    def _circuit_masks(self):
        return [sum(1 << i for i in c) for c in self.circuits]

    def is_independent(self, subset: Sequence[int]) -> bool:
        mask = sum(1 << i for i in subset)
        return not any(c & mask == c for c in self._circuit_masks())

    def rank_of(self, subset: Sequence[int]) -> int:
        """Greedy rank: size of a maximal independent subset."""
        masks = self._circuit_masks()
        basis = 0
        r = 0
        for i in sorted(set(subset)):
            trial = basis | (1 << i)
            if not any(c & trial == c for c in masks):
                basis = trial
                r += 1
        return r

    def closure(self, subset: Sequence[int]) -> Flat:
        r = self.rank_of(subset)
        return tuple(i for i in range(self.n) if i in subset or self.rank_of(list(subset) + [i]) == r)

    def check_axioms(self) -> None:
        """Exhaustive circuit axioms plus consistency of the stated rank."""
        masks = self._circuit_masks()
        if any(m == 0 for m in masks):
            raise CombinatoricsError("the empty set is not a circuit")
        for a, b in itertools.combinations(masks, 2):
            if a & b == a or a & b == b:
                raise CombinatoricsError("one circuit contains another")
        for a, b in itertools.permutations(masks, 2):
            common = a & b
            while common:
                e = common & -common
                common ^= e
                union = (a | b) & ~e
                if not any(c & union == c for c in masks):
                    raise CombinatoricsError("circuit elimination fails")
        if self.rank_of(range(self.n)) != self.rank:
            raise CombinatoricsError("stated rank disagrees with the circuits")

    def rank2_flats(self) -> LineCombinatorics:
        """Re-extract the rank-2 flats (closures of pairs)."""
        flats = {self.closure([i, j]) for i, j in itertools.combinations(range(self.n), 2)}
        return LineCombinatorics.build(self.n, sorted(flats))


def matroid_from_line_combinatorics(lc: LineCombinatorics) -> Matroid:
    """The simple matroid of rank at most 3 with these rank-2 flats.

    Circuits are the 3-subsets of a flat and the 4-subsets containing none;
    when one flat holds every element the rank drops to 2.
    """
    n = lc.n
    if n <= 2:
        return Matroid.build(n, n, [])
    if lc.is_pencil():
        return Matroid.build(n, 2, itertools.combinations(range(n), 3))
    triples = {t for f in lc.flats for t in itertools.combinations(f, 3)}
    circuits = list(triples)
    for quad in itertools.combinations(range(n), 4):
        if not any(t in triples for t in itertools.combinations(quad, 3)):
            circuits.append(quad)
    return Matroid.build(n, 3, circuits)


def _det3(a, b, c) -> int:
    return (a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def _cross_is_zero(a, b) -> bool:
    return a[1] * b[2] == a[2] * b[1] and a[0] * b[2] == a[2] * b[0] and a[0] * b[1] == a[1] * b[0]


def from_normals(normals: Sequence[Sequence[int]]) -> LineCombinatorics:
    """Rank-2 flats of a central arrangement in C^3 given by integer normals."""
    vecs = [tuple(v) for v in normals]
    for i, v in enumerate(vecs):
        if len(v) != 3:
            raise CombinatoricsError(
                f"normal {i} has length {len(v)}; only arrangements in 3-space are supported")
        if any(not isinstance(x, int) or isinstance(x, bool) for x in v):
            raise CombinatoricsError(f"normal {i} has non-integer entries")
        if not any(v):
            raise CombinatoricsError(f"normal {i} is zero")
    for i, j in itertools.combinations(range(len(vecs)), 2):
        if _cross_is_zero(vecs[i], vecs[j]):
            raise CombinatoricsError(f"normals {i} and {j} are proportional (duplicate hyperplane)")
    flats = set()
    for i, j in itertools.combinations(range(len(vecs)), 2):
        flats.add(tuple(k for k in range(len(vecs))
                        if k in (i, j) or _det3(vecs[i], vecs[j], vecs[k]) == 0))
    return LineCombinatorics.build(len(vecs), sorted(flats))


def matroid_from_normals(normals: Sequence[Sequence[int]]) -> Matroid:
    """Matroid of the normals read off determinants (independent of flats)."""
    from_normals(normals)  # validation only
    vecs = [tuple(v) for v in normals]
    n = len(vecs)
    dep3 = {t for t in itertools.combinations(range(n), 3) if _det3(*(vecs[i] for i in t)) == 0}
    full_rank = any(t not in dep3 for t in itertools.combinations(range(n), 3))
    if not full_rank:
        return Matroid.build(n, min(n, 2), dep3)
    circuits = list(dep3)
    for quad in itertools.combinations(range(n), 4):
        if not any(t in dep3 for t in itertools.combinations(quad, 3)):
            circuits.append(quad)
    return Matroid.build(n, 3, circuits)


# --------------------------------------------------------------------------
# graphs


@dataclass(frozen=True)
class Graph:
    """A simple graph; edge ``i`` becomes hyperplane ``i``."""

    vertices: int
    edges: tuple[tuple[int, int], ...]

    @classmethod
    def build(cls, vertices: int, edges: Sequence[Sequence[int]]) -> "Graph":
        if not isinstance(vertices, int) or isinstance(vertices, bool) or vertices < 0:
            raise CombinatoricsError(f"vertex count must be a nonnegative integer, got {vertices!r}")
        out = []
        seen = set()
        for e in edges:
            if len(e) != 2:
                raise CombinatoricsError(f"edge {list(e)} does not have two endpoints")
            u, v = e
            if any(not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < vertices for x in (u, v)):
                raise CombinatoricsError(f"edge {list(e)} has an endpoint outside 0..{vertices - 1}")
            if u == v:
                raise CombinatoricsError(f"edge {list(e)} is a loop")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise CombinatoricsError(f"edge {list(e)} is repeated")
            seen.add(key)
            out.append(key)
        return cls(vertices, tuple(out))

    @classmethod
    def complete(cls, v: int) -> "Graph":
        return cls.build(v, list(itertools.combinations(range(v), 2)))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.vertices))
        g.add_edges_from(self.edges)
        return g


def graphic(g: Graph) -> tuple[LineCombinatorics, Matroid, dict[int, int]]:
    """Combinatorics, cycle matroid and clique counts of a graphic arrangement.

    ``kappa[s]`` counts complete subgraphs on ``s + 1`` vertices for
    ``s = 1 .. vertices - 1``.
    """
    index = {e: i for i, e in enumerate(g.edges)}

    def eid(u, v):
        return index[(min(u, v), max(u, v))]

    G = g.to_networkx()
    kappa = {s: 0 for s in range(1, max(g.vertices, 1))}
    triangles = []
    for clique in nx.enumerate_all_cliques(G):
        s = len(clique) - 1
        if s >= 1:
            kappa[s] += 1
        if s == 2:
            a, b, c = clique
            triangles.append(sorted((eid(a, b), eid(b, c), eid(a, c))))
    lc = LineCombinatorics.build(len(g.edges), triangles)
    circuits = []
    for cyc in nx.simple_cycles(G):
        circuits.append([eid(cyc[t], cyc[(t + 1) % len(cyc)]) for t in range(len(cyc))])
    rank = g.vertices - nx.number_connected_components(G)
    return lc, Matroid.build(len(g.edges), rank, circuits), kappa


# --------------------------------------------------------------------------
# sub-arrangements


@dataclass(frozen=True)
class SubArrangement:
    """A subset of hyperplanes with the flats it induces (doubles explicit)."""

    ground: Flat
    flats: tuple[Flat, ...]


def induced(lc: LineCombinatorics, subset: Sequence[int]) -> SubArrangement:
    s = set(subset)
    flats = set()
    for f in lc.flats:
        cut = tuple(i for i in f if i in s)
        if len(cut) >= 2:
            flats.add(cut)
    for d in lc.doubles:
        if d[0] in s and d[1] in s:
            flats.add(d)
    return SubArrangement(tuple(sorted(s)), tuple(sorted(flats)))


def subarrangements(lc: LineCombinatorics, min_size: int = 3,
                    max_size: int | None = None) -> Iterator[SubArrangement]:
    """Every subset of at least ``min_size`` hyperplanes with its induced flats.

    Subsets come by increasing size, lexicographically within a size;
    ``max_size`` caps the search.
    """
    if min_size < 3:
        raise CombinatoricsError("sub-arrangements need at least 3 hyperplanes")
    top = lc.n if max_size is None else min(max_size, lc.n)
    for size in range(min_size, top + 1):
        for subset in itertools.combinations(range(lc.n), size):
            yield induced(lc, subset)
