"""Exterior algebra, Orlik-Solomon ideal and the graded pieces of A = E/I.

Monomials are bitsets: ``e_S`` for ``S = {i < j < ...}`` is the integer with
those bits set, always read in ascending order.  ``A_d`` is modelled as the
span of the standard monomials, the monomials that do not lead any row of
the canonical reduced echelon basis of ``I_d``.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import exactla
from .combinatorics import Matroid
from .exactla import SparseMatrix


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(subset: Iterable[int]) -> int:
    m = 0
    for i in subset:
        m |= 1 << i
    return m


def wedge_sign(a: int, b: int) -> int:
    """Sign of ``e_a ∧ e_b`` relative to the ascending monomial ``e_{a|b}``."""
    if a & b:
        return 0
    swaps = 0
    for j in bits(b):
        swaps += bin(a >> (j + 1)).count("1")
    return -1 if swaps & 1 else 1


@dataclass(frozen=True)
class ExteriorElement:
    """A homogeneous element of the exterior algebra over Q."""

    terms: tuple[tuple[int, object], ...]

    @classmethod
    def from_dict(cls, terms: Mapping[int, object]) -> "ExteriorElement":
        clean = {}
        for mask, c in terms.items():
            c = exactla._as_rational(c)
            if c:
                clean[mask] = c
        degrees = {bin(m).count("1") for m in clean}
        if len(degrees) > 1:
            raise ValueError("exterior elements must be homogeneous")
        return cls(tuple(sorted(clean.items())))

    @classmethod
    def monomial(cls, subset: Iterable[int], coeff=1) -> "ExteriorElement":
        return cls.from_dict({mask_of(subset): coeff})

    @classmethod
    def generator(cls, i: int) -> "ExteriorElement":
        return cls.monomial([i])

    @classmethod
    def linear(cls, coeffs: Sequence[object]) -> "ExteriorElement":
        """The degree-1 element ``sum_i coeffs[i] e_i``."""
        return cls.from_dict({1 << i: c for i, c in enumerate(coeffs)})

    @property
    def degree(self) -> int | None:
        """Degree, or None for the zero element."""
        return bin(self.terms[0][0]).count("1") if self.terms else None

    def as_dict(self) -> dict[int, object]:
        return dict(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "ExteriorElement") -> "ExteriorElement":
        out = self.as_dict()
        for m, c in other.terms:
            out[m] = out.get(m, 0) + c
        return ExteriorElement.from_dict(out)

    def __neg__(self) -> "ExteriorElement":
        return ExteriorElement(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: "ExteriorElement") -> "ExteriorElement":
        return self + (-other)

    def scale(self, c) -> "ExteriorElement":
        return ExteriorElement.from_dict({m: c * v for m, v in self.terms})

    def wedge(self, other: "ExteriorElement") -> "ExteriorElement":
        out: dict[int, object] = {}
        for a, ca in self.terms:
            for b, cb in other.terms:
                s = wedge_sign(a, b)
                if s:
                    out[a | b] = out.get(a | b, 0) + s * ca * cb
        return ExteriorElement.from_dict(out)

    __xor__ = wedge

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            name = "e" + "".join(map(str, bits(m))) if m else "1"
            parts.append(f"{c}*{name}")
        return " + ".join(parts)


def wedge(x: ExteriorElement, y: ExteriorElement) -> ExteriorElement:
    return x.wedge(y)


def boundary(subset: Sequence[int]) -> ExteriorElement:
    """``∂e_S = sum_q (-1)^q e_{S - s_q}`` with ``S`` read ascending."""
    s = sorted(subset)
    if len(set(s)) != len(s):
        raise ValueError("boundary of a monomial with a repeated index")
    if len(s) < 1:
        raise ValueError("boundary needs a nonempty index set")
    return ExteriorElement.from_dict({mask_of(s[:q] + s[q + 1:]): (-1) ** q for q in range(len(s))})


# --------------------------------------------------------------------------
# monomial bases


@functools.lru_cache(maxsize=None)
def monomials(n: int, d: int) -> tuple[int, ...]:
    """Degree-``d`` monomial masks in lexicographic order of index sets."""
    return tuple(mask_of(c) for c in itertools.combinations(range(n), d))


@functools.lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> dict[int, int]:
    return {m: i for i, m in enumerate(monomials(n, d))}


def to_vector(x: ExteriorElement, n: int, d: int) -> dict[int, object]:
    """Sparse coordinates of ``x`` over the degree-``d`` monomial basis."""
    idx = monomial_index(n, d)
    return {idx[m]: c for m, c in x.terms}


@dataclass(frozen=True)
class GradedSubspace:
    """A subspace of E_d given by its canonical reduced echelon basis."""

    n: int
    degree: int
    basis: tuple[tuple, ...]

    @property
    def ambient(self) -> int:
        return math.comb(self.n, self.degree)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, x: ExteriorElement) -> bool:
        if not x:
            return True
        vec = exactla._densify(to_vector(x, self.n, self.degree), self.ambient)
        return exactla.subspace_contains(self.basis, [vec]) if self.basis else False


def _ideal_generators(m: Matroid, d: int) -> list[dict[int, object]]:
    idx = monomial_index(m.n, d)
    gens = []
    for c in m.circuits:
        t_size = d - len(c) + 1
        if t_size < 0:
            continue
        dc = boundary(c)
        # T may meet C in one element: e_i ∧ ∂e_C = ±e_C also lies in I
        for t in itertools.combinations(range(m.n), t_size):
            g = ExteriorElement.monomial(t).wedge(dc)
            if g:
                gens.append({idx[mm]: cc for mm, cc in g.terms})
    return gens


@functools.lru_cache(maxsize=None)
def os_ideal_piece(m: Matroid, d: int) -> GradedSubspace:
    """``I_d``: span of ``e_T ∧ ∂e_C`` over circuits ``C`` and monomials ``e_T``.

    ``I`` vanishes below degree 2 (a simple matroid has no circuits of size
    at most 2), so small ``d`` yields the zero subspace.
    """
    if d < 0:
        raise ValueError("degree must be nonnegative")
    gens = _ideal_generators(m, d) if d >= 1 else []
    length = math.comb(m.n, d)
    basis = exactla.rref_canonical(gens, length) if gens else []
    return GradedSubspace(m.n, d, tuple(basis))


@dataclass(frozen=True)
class Complement:
    """Standard-monomial model of ``A_d`` and the reduction ``E_d -> A_d``."""

    n: int
    degree: int
    standard: tuple[int, ...]     # monomial masks spanning A_d
    reduction: dict               # leading monomial mask -> {standard mask: coeff}

    @property
    def dim(self) -> int:
        return len(self.standard)

    def reduce(self, x: ExteriorElement | Mapping[int, object]) -> dict[int, object]:
        """Coordinates of ``x mod I_d`` keyed by standard monomial mask."""
        terms = x.terms if isinstance(x, ExteriorElement) else x.items()
        out: dict[int, object] = {}
        for mask, c in terms:
            row = self.reduction.get(mask)
            if row is None:
                out[mask] = out.get(mask, 0) + c
            else:
                for s, v in row.items():
                    out[s] = out.get(s, 0) + c * v
        return {k: v for k, v in out.items() if v}

    @functools.cached_property
    def position(self) -> dict[int, int]:
        return {s: i for i, s in enumerate(self.standard)}


def _complement_of(n: int, d: int, basis) -> Complement:
    mons = monomials(n, d)
    reduction = {}
    for row in basis:
        lead = next(i for i, v in enumerate(row) if v)
        reduction[mons[lead]] = {mons[j]: -v for j, v in enumerate(row) if v and j != lead}
    standard = tuple(mk for mk in mons if mk not in reduction)
    return Complement(n, d, standard, reduction)


@functools.lru_cache(maxsize=None)
def complement(m: Matroid, d: int) -> Complement:
    return _complement_of(m.n, d, os_ideal_piece(m, d).basis)


@functools.lru_cache(maxsize=None)
def decone_complement(m: Matroid, d: int) -> Complement:
    """``A/(e_0)`` in degree ``d``, over ``e_1 .. e_{n-1}`` relabelled ``0 .. n-2``.

    Because ``A ≅ A/(e_0) ⊗ Λ(e_0)`` as modules over ``E ≅ E' ⊗ Λ(e_0)``,
    this quotient carries all of ``Tor^E(A, k)`` with one variable fewer.
    Its ideal is ``I_d`` with ``e_0`` set to zero.
    """
    if m.n == 0:
        raise ValueError("the empty arrangement has no decone")
    mons = monomials(m.n, d)
    idx = monomial_index(m.n - 1, d)
    rows = []
    for row in os_ideal_piece(m, d).basis:
        vec = {idx[mons[j] >> 1]: v for j, v in enumerate(row) if v and not mons[j] & 1}
        if vec:
            rows.append(vec)
    basis = exactla.rref_canonical(rows, math.comb(m.n - 1, d)) if rows else []
    return _complement_of(m.n - 1, d, basis)


def a_dims(m: Matroid) -> list[int]:
    """``dim A_d`` for ``d = 0 .. rank``."""
    return [math.comb(m.n, d) - os_ideal_piece(m, d).dim for d in range(m.rank + 1)]


def nbc_dims(m: Matroid) -> list[int]:
    """Independent oracle: counts of d-sets containing no broken circuit."""
    broken = [mask_of(c) & ~(1 << min(c)) for c in m.circuits]
    out = []
    for d in range(m.rank + 1):
        out.append(sum(1 for s in monomials(m.n, d) if not any(b & s == b for b in broken)))
    return out


# --------------------------------------------------------------------------
# multiplication


def _action(src: Complement, dst: Complement) -> tuple[tuple[dict[int, object], ...], ...]:
    pos = dst.position
    out = []
    for l in range(src.n):
        cols = []
        for mask in src.standard:
            s = wedge_sign(1 << l, mask)
            if not s:
                cols.append({})
                continue
            red = dst.reduce({mask | (1 << l): s})
            cols.append({pos[k]: v for k, v in red.items()})
        out.append(tuple(cols))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def generator_action(m: Matroid, p: int) -> tuple[tuple[dict[int, object], ...], ...]:
    """``action[l][i]``: coordinates in ``A_{p+1}`` of ``e_l`` times the
    ``i``-th standard monomial of ``A_p``."""
    return _action(complement(m, p), complement(m, p + 1))


@functools.lru_cache(maxsize=None)
def decone_action(m: Matroid, p: int) -> tuple[tuple[dict[int, object], ...], ...]:
    """The same for ``A/(e_0)``, with generators ``e_1 .. e_{n-1}``."""
    return _action(decone_complement(m, p), decone_complement(m, p + 1))


def multiplication_map(m: Matroid, a: Sequence[object]) -> SparseMatrix:
    """Matrix of ``b -> a·b`` from ``A_1`` (basis ``e_i``) to ``A_2``."""
    if len(a) != m.n:
        raise ValueError("vector length must equal the number of hyperplanes")
    action = generator_action(m, 1)
    dim2 = complement(m, 2).dim
    # I_1 = 0, so the standard monomials of A_1 are e_0 .. e_{n-1} in order
    columns = []
    for j in range(m.n):
        col: dict[int, object] = {}
        for l, coeff in enumerate(a):
            if coeff:
                for k, v in action[l][j].items():
                    col[k] = col.get(k, 0) + coeff * v
        columns.append(col)
    return SparseMatrix.from_columns(dim2, columns)


def isotropic(m: Matroid, basis: Sequence[Sequence[object]]) -> bool:
    """True iff every pairwise wedge of the given degree-1 vectors lies in I_2."""
    comp = complement(m, 2)
    elems = [ExteriorElement.linear(v) for v in basis]
    for x, y in itertools.combinations(elems, 2):
        if comp.reduce(x.wedge(y)):
            return False
    return True


def in_ideal(m: Matroid, x: ExteriorElement) -> bool:
    if not x:
        return True
    return not complement(m, x.degree).reduce(x)

