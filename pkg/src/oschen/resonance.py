"""Components of the first resonance variety and the Chen ranks formula.

Components come from two sources: every flat with at least three elements
gives a local component, and neighborly partitions of sub-arrangements give
candidate subspaces.  Nothing is reported unless it passes the exact
isotropy test ``L ∧ L ⊆ I₂``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import exactla
from .combinatorics import LineCombinatorics, Matroid, SubArrangement, induced, subarrangements
from .exactla import InvariantError
from .osalgebra import ExteriorElement, complement, isotropic, multiplication_map


# --------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class Partition:
    """Blocks of a ground set, stored canonically (sorted, by first element)."""

    ground: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]]) -> "Partition":
        bl = sorted(tuple(sorted(b)) for b in blocks)
        if any(not b for b in bl):
            raise ValueError("partition blocks must be nonempty")
        ground = [i for b in bl for i in b]
        if len(set(ground)) != len(ground):
            raise ValueError("partition blocks must be disjoint")
        return cls(tuple(sorted(ground)), tuple(bl))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Read the ``"05|13|24"`` notation (single-digit labels)."""
        return cls.of([[int(ch) for ch in blk] for blk in text.strip("()").split("|")])

    def __str__(self):
        if all(i < 10 for i in self.ground):
            return "(" + "|".join("".join(map(str, b)) for b in self.blocks) + ")"
        return "(" + "|".join(",".join(map(str, b)) for b in self.blocks) + ")"


@dataclass(frozen=True)
class ResonanceComponent:
    """A linear subspace L of Q^n lying in the resonance variety."""

    basis: tuple[tuple, ...]
    kind: str                      # "local" or "essential"
    provenance: tuple = field(compare=False)
    verified: bool = field(default=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def projective_dimension(self) -> int:
        return len(self.basis) - 1


HVector = dict  # projective dimension -> number of components


def h_vector(components: Sequence[ResonanceComponent]) -> dict[int, int]:
    h: dict[int, int] = {}
    for c in components:
        h[c.projective_dimension] = h.get(c.projective_dimension, 0) + 1
    return dict(sorted(h.items()))


# --------------------------------------------------------------------------
# pointwise resonance


def aomoto_h1(m: Matroid, a: Sequence[object]) -> int:
    """``dim ker(a·: A₁ -> A₂)``; at least 1 for ``a != 0``."""
    mm = multiplication_map(m, a)
    return m.n - exactla.rank(mm, exactla.EXACT)


def is_resonant(m: Matroid, a: Sequence[object]) -> bool:
    """True iff multiplication by ``a`` has a kernel beyond ``a`` itself."""
    if not any(a):
        raise ValueError("resonance is defined for nonzero vectors")
    return aomoto_h1(m, a) >= 2


# --------------------------------------------------------------------------
# local components


def _canonical(vectors: Sequence[Sequence[object]], n: int) -> tuple[tuple, ...]:
    return tuple(exactla.rref_canonical(list(vectors), n)) if vectors else ()


def local_component(n: int, flat: Sequence[int]) -> ResonanceComponent:
    y = sorted(flat)
    vecs = []
    for i in y[1:]:
        v = [0] * n
        v[y[0]] = 1
        v[i] = -1
        vecs.append(v)
    return ResonanceComponent(_canonical(vecs, n), "local", ("flat", tuple(y)))


def local_components(lc: LineCombinatorics) -> list[ResonanceComponent]:
    """One component per flat of size at least 3, projective dimension |Y| - 2."""
    return [local_component(lc.n, y) for y in lc.flats]


# --------------------------------------------------------------------------
# neighborly partitions


def _as_sub(lc: LineCombinatorics | SubArrangement) -> SubArrangement:
    return induced(lc, range(lc.n)) if isinstance(lc, LineCombinatorics) else lc


def _violates(flats: Iterable[Sequence[int]], partition: Partition, min_size: int) -> bool:
    for y in flats:
        if len(y) < min_size:
            continue
        mu = len(y) - 1
        ys = set(y)
        for block in partition.blocks:
            meet = len(ys.intersection(block))
            if mu <= meet and not ys.issubset(block):
                return True
    return False


def _check_ground(sub: SubArrangement, partition: Partition):
    if partition.ground != sub.ground:
        raise ValueError("partition does not cover the sub-arrangement")


def is_neighborly(lc: LineCombinatorics | SubArrangement, partition: Partition) -> bool:
    """``μ(Y) <= |Y ∩ π|`` forces ``Y ⊆ π``, for every induced flat and block."""
    sub = _as_sub(lc)
    _check_ground(sub, partition)
    return not _violates(sub.flats, partition, 2)


def is_almost_neighborly(lc: LineCombinatorics | SubArrangement, partition: Partition) -> bool:
    """The neighborly condition restricted to flats with ``μ(Y) > 1``."""
    sub = _as_sub(lc)
    _check_ground(sub, partition)
    return not _violates(sub.flats, partition, 3)


def candidate_subspace(lc: LineCombinatorics, subset: Sequence[int],
                       partition: Partition) -> tuple[tuple, ...] | None:
    """Vectors supported on ``subset``, constant on blocks, with zero sum on
    every induced flat that is not inside a single block.  None if the
    space has dimension below 2."""
    sub = induced(lc, subset)
    _check_ground(sub, partition)
    block_of = {i: b for b, blk in enumerate(partition.blocks) for i in blk}
    nb = len(partition.blocks)
    constraints = []
    for y in sub.flats:
        if len({block_of[i] for i in y}) == 1:
            continue
        row: dict[int, int] = {}
        for i in y:
            row[block_of[i]] = row.get(block_of[i], 0) + 1
        constraints.append(row)
    sol = exactla.solve_null_space(constraints, nb) if constraints else [
        tuple(1 if i == j else 0 for i in range(nb)) for j in range(nb)]
    if len(sol) < 2:
        return None
    vecs = []
    for s in sol:
        v = [0] * lc.n
        for b, blk in enumerate(partition.blocks):
            for i in blk:
                v[i] = s[b]
        vecs.append(v)
    return _canonical(vecs, lc.n)


def neighborly_partitions(sub: SubArrangement, min_blocks: int = 3,
                          max_blocks: int | None = None,
                          almost: bool = False) -> tuple[list[Partition], bool]:
    """All neighborly partitions of a sub-arrangement with a block count in
    range, plus a flag telling whether the block cap cut the search.

    Doubles force their two elements into one block, and a flat with
    ``|Y| - 1`` elements in a block forces the rest in too; the search
    assigns the forced classes to blocks and prunes on each completed flat.
    With ``almost`` doubles impose nothing, which yields the almost
    neighborly partitions.
    """
    ground = sub.ground
    parent = {i: i for i in ground}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for y in sub.flats:
        if len(y) == 2 and not almost:
            a, b = find(y[0]), find(y[1])
            if a != b:
                parent[max(a, b)] = min(a, b)
    classes: dict[int, list[int]] = {}
    for i in ground:
        classes.setdefault(find(i), []).append(i)
    cls = sorted(classes.values())
    cls_of = {i: c for c, members in enumerate(cls) for i in members}
    multi = [y for y in sub.flats if len(y) >= 3]
    # a flat is checked once all of its classes are placed
    due: dict[int, list[tuple[int, ...]]] = {}
    for y in multi:
        due.setdefault(max(cls_of[i] for i in y), []).append(y)

    assign = [-1] * len(cls)
    found: list[Partition] = []
    truncated = False

    def ok_flat(y):
        mu = len(y) - 1
        counts: dict[int, int] = {}
        for i in y:
            b = assign[cls_of[i]]
            counts[b] = counts.get(b, 0) + 1
        return not any(mu <= c and c < len(y) for c in counts.values())

    def rec(c: int, nblocks: int):
        nonlocal truncated
        if c == len(cls):
            if nblocks >= min_blocks:
                blocks: dict[int, list[int]] = {}
                for ci, b in enumerate(assign):
                    blocks.setdefault(b, []).extend(cls[ci])
                found.append(Partition.of(blocks.values()))
            return
        remaining = len(cls) - c
        if nblocks + remaining < min_blocks:
            return
        for b in range(nblocks + 1):
            if b == nblocks and max_blocks is not None and nblocks >= max_blocks:
                truncated = True
                break
            assign[c] = b
            if all(ok_flat(y) for y in due.get(c, ())):
                rec(c + 1, max(nblocks, b + 1))
            assign[c] = -1

    if cls:
        rec(0, 0)
    return found, truncated


def almost_only_partitions(lc: LineCombinatorics, min_blocks: int = 3) -> list[Partition]:
    """Partitions of the whole arrangement that are almost neighborly but
    not neighborly."""
    sub = _as_sub(lc)
    parts, _ = neighborly_partitions(sub, min_blocks, almost=True)
    return [p for p in parts if not is_neighborly(sub, p)]


# --------------------------------------------------------------------------
# enumeration


@dataclass(frozen=True)
class SearchLimits:
    """Bounds on the partition search.

    ``max_size`` caps the sub-arrangement size (None: all of them);
    ``max_blocks`` caps the number of blocks (None: no cap).
    """

    max_size: int | None = None
    max_blocks: int | None = None
    min_blocks: int = 3


@dataclass(frozen=True)
class ResonanceResult:
    components: tuple[ResonanceComponent, ...]
    h: dict
    complete: bool
    candidates_examined: int


def _span_contains(big: Sequence[tuple], small: Sequence[tuple]) -> bool:
    return exactla.subspace_contains(big, small)


def enlargement(m: Matroid, basis: Sequence[Sequence[object]]) -> tuple[tuple, ...]:
    """``N(L) = {v : v ∧ w ∈ I₂ for all w in L}`` as a canonical basis."""
    comp = complement(m, 2)
    pos = comp.position
    constraints = []
    units = [ExteriorElement.generator(i) for i in range(m.n)]
    for w in basis:
        we = ExteriorElement.linear(w)
        # column j of the map v -> v ∧ w is e_j ∧ w reduced mod I₂
        images = [comp.reduce(units[j].wedge(we)) for j in range(m.n)]
        rows: dict[int, dict[int, object]] = {}
        for j, img in enumerate(images):
            for mask, c in img.items():
                rows.setdefault(pos[mask], {})[j] = c
        constraints.extend(rows.values())
    return tuple(exactla.solve_null_space(constraints, m.n)) if constraints else tuple(
        tuple(1 if i == j else 0 for i in range(m.n)) for j in range(m.n))


def enumerate_components(lc: LineCombinatorics, m: Matroid,
                         limits: SearchLimits = SearchLimits()) -> ResonanceResult:
    """Local components plus verified components from neighborly partitions."""
    n = lc.n
    found: list[ResonanceComponent] = []
    for comp in local_components(lc):
        if not isotropic(m, comp.basis):
            raise InvariantError(f"local component of flat {comp.provenance[1]} is not isotropic")
        found.append(ResonanceComponent(comp.basis, "local", comp.provenance, True))

    complete = limits.max_size is None or limits.max_size >= n
    examined = 0
    seen: set[tuple] = {c.basis for c in found}
    min_size = max(3, limits.min_blocks)
    for sub in subarrangements(lc, min_size, limits.max_size):
        parts, cut = neighborly_partitions(sub, limits.min_blocks, limits.max_blocks)
        if cut:
            complete = False
        for part in parts:
            basis = candidate_subspace(lc, sub.ground, part)
            if basis is None or basis in seen:
                continue
            seen.add(basis)
            examined += 1
            if not isotropic(m, basis):
                continue
            big = enlargement(m, basis)
            if len(big) > len(basis) and isotropic(m, big):
                basis = tuple(exactla.rref_canonical(list(big), n))
            found.append(ResonanceComponent(basis, "essential", ("partition", sub.ground, str(part)), True))

    # deduplicate and keep maximal subspaces
    unique: dict[tuple, ResonanceComponent] = {}
    for c in found:
        if c.basis not in unique or (unique[c.basis].kind != "local" and c.kind == "local"):
            unique[c.basis] = c
    comps = list(unique.values())
    maximal = [c for c in comps
               if not any(d is not c and d.dim > c.dim and _span_contains(d.basis, c.basis) for d in comps)]
    maximal.sort(key=lambda c: (c.kind != "local", c.basis))
    for c in maximal:
        for v in c.basis:
            if sum(v) != 0:
                raise InvariantError("a resonance component leaves the hyperplane sum(a) = 0")
    for a, b in itertools.combinations(maximal, 2):
        if exactla.subspace_intersection_dim(a.basis, b.basis):
            raise InvariantError(
                f"resonance components {a.provenance} and {b.provenance} intersect")
    return ResonanceResult(tuple(maximal), h_vector(maximal), complete, examined)


# --------------------------------------------------------------------------
# sampling


def sample_point(component: ResonanceComponent, rng: random.Random, bound: int = 50) -> list:
    """A random nonzero point of the component with integer weights in [-bound, bound]."""
    while True:
        w = [rng.randint(-bound, bound) for _ in component.basis]
        if any(w):
            n = len(component.basis[0])
            return [sum(Fraction(wi) * v[i] for wi, v in zip(w, component.basis)) for i in range(n)]


def off_component_point(components: Sequence[ResonanceComponent], n: int,
                        rng: random.Random, bound: int = 50) -> list[int]:
    """A random integer point with coordinate sum 0 outside every component."""
    while True:
        v = [rng.randint(-bound, bound) for _ in range(n - 1)]
        v.append(-sum(v))
        if not any(v):
            continue
        if not any(_span_contains(c.basis, [tuple(v)]) for c in components):
            return v


# --------------------------------------------------------------------------
# Chen ranks formula


def bp_hilbert(r: int, k: int) -> int:
    """Hilbert function of B(p) for a component of projective dimension r."""
    if r < 1 or k < 2:
        raise ValueError("need r >= 1 and k >= 2")
    return (k - 1) * math.comb(r + k - 1, k)


def conjecture_rhs(h: dict, k: int) -> int:
    """``(k-1) sum_r h_r C(r+k-1, k)``."""
    if k < 2:
        raise ValueError("the formula starts at k = 2")
    return sum(cnt * bp_hilbert(r, k) for r, cnt in h.items() if cnt)


@dataclass(frozen=True)
class LowerBoundRow:
    k: int
    theta: int
    rhs: int

    @property
    def difference(self) -> int:
        return self.theta - self.rhs


def lower_bound_check(theta, h: dict, k_range: Iterable[int],
                      stabilization: int | None) -> list[LowerBoundRow]:
    """Rows ``θ_k - rhs_k``; negative values at or beyond the stabilization
    index raise, below it they are only reported."""
    rows = []
    for k in k_range:
        row = LowerBoundRow(k, theta[k], conjecture_rhs(h, k))
        if stabilization is not None and k >= stabilization and row.difference < 0:
            raise InvariantError(
                f"lower bound fails at k={k}: theta={row.theta} < {row.rhs}")
        rows.append(row)
    return rows
