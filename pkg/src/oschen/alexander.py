"""The linearized Alexander invariant B and the Chen ranks.

B is the cokernel of ``Δ^lin = α₂ ⊗ id + δ₃`` on ``E₂ ⊗ S`` with generators
in degree 2, so ``θ_k = dim B_k`` for ``k >= 2``.  Two routes compute
``dim B_k``:

``full``
    the Macaulay matrix of the whole presentation in degree ``k``;
``reduced``
    first quotient by the constant block (``E₂ / im α₂`` has the basis of
    linear functionals vanishing on ``im α₂``), then reduce modulo the
    annihilating linear form ``f = x_0 + ... + x_{n-1}``, which turns S into
    a polynomial ring in ``n - 1`` variables.

Both give the same numbers; the reduced matrices are several times smaller.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import exactla
from .combinatorics import LineCombinatorics
from .exactla import DEFAULT_STRATEGY, RankStrategy
from .osalgebra import ExteriorElement, monomial_index


# --------------------------------------------------------------------------
# polynomial monomials


@functools.lru_cache(maxsize=None)
def poly_monomials(nvars: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Degree-``d`` monomials as sorted variable tuples, in lex order."""
    if d < 0:
        return ()
    return tuple(itertools.combinations_with_replacement(range(nvars), d))


@functools.lru_cache(maxsize=None)
def poly_index(nvars: int, d: int) -> dict[tuple[int, ...], int]:
    return {m: i for i, m in enumerate(poly_monomials(nvars, d))}


def poly_dim(nvars: int, d: int) -> int:
    if d < 0:
        return 0
    if nvars == 0:
        return 1 if d == 0 else 0
    return math.comb(nvars + d - 1, d)


def times_var(mono: tuple[int, ...], v: int) -> tuple[int, ...]:
    out = list(mono)
    pos = len(out)
    while pos and out[pos - 1] > v:
        pos -= 1
    out.insert(pos, v)
    return tuple(out)


# --------------------------------------------------------------------------
# presentation


@dataclass(frozen=True, order=True)
class NbcPair:
    """Basis element ``(Y, j)`` of A₂, ``j`` a non-minimal element of flat ``Y``."""

    flat: tuple[int, ...]
    index: int


def nbc_basis_a2(lc: LineCombinatorics) -> list[NbcPair]:
    return [NbcPair(y, j) for y in lc.all_flats for j in y if j != min(y)]


def alpha2(pair: NbcPair) -> ExteriorElement:
    """``e_j ∧ sum_{i in Y} e_i``."""
    total = ExteriorElement.linear([1 if i in pair.flat else 0 for i in range(max(pair.flat) + 1)])
    return ExteriorElement.generator(pair.index).wedge(total)


@dataclass(frozen=True)
class GradedPresentation:
    """A graded cokernel over ``Q[x_0 .. x_{n-1}]``.

    ``constant`` columns have rational entries keyed by generator and sit in
    the generator degree; ``linear`` columns have entries keyed by
    ``(generator, variable)`` and sit one degree higher.  ``annihilator``,
    when set, is a linear form (coefficient tuple, last entry nonzero) known
    to kill the module.
    """

    n: int
    generators: int
    generator_degree: int
    constant: tuple[dict, ...]
    linear: tuple[dict, ...]
    annihilator: tuple | None = None
    labels: tuple = field(default=(), compare=False)


def build_delta_lin(lc: LineCombinatorics) -> GradedPresentation:
    n = lc.n
    idx = monomial_index(n, 2)
    pairs = nbc_basis_a2(lc)
    constant = []
    for pair in pairs:
        constant.append({idx[m]: c for m, c in alpha2(pair).terms})
    linear = []
    for a, b, c in itertools.combinations(range(n), 3):
        bc, ac, ab = (1 << b) | (1 << c), (1 << a) | (1 << c), (1 << a) | (1 << b)
        linear.append({(idx[bc], a): 1, (idx[ac], b): -1, (idx[ab], c): 1})
    return GradedPresentation(
        n=n,
        generators=math.comb(n, 2),
        generator_degree=2,
        constant=tuple(constant),
        linear=tuple(linear),
        annihilator=tuple([1] * n) if n else None,
        labels=tuple(itertools.combinations(range(n), 2)),
    )


# --------------------------------------------------------------------------
# degreewise matrices


def full_vectors(p: GradedPresentation, k: int) -> tuple[list[dict], int]:
    """Columns of the Macaulay matrix ``M_k`` and their length."""
    e = k - p.generator_degree
    if e < 0:
        return [], 0
    rows = poly_index(p.n, e)
    nrow = len(rows)
    vecs = []
    for col in p.constant:
        for mono, r in rows.items():
            vecs.append({g * nrow + r: c for g, c in col.items()})
    for col in p.linear:
        for mono in poly_monomials(p.n, e - 1):
            vec = {}
            for (g, v), c in col.items():
                pos = g * nrow + rows[times_var(mono, v)]
                vec[pos] = vec.get(pos, 0) + c
            vecs.append({i: c for i, c in vec.items() if c})
    return vecs, p.generators * nrow


@dataclass(frozen=True)
class ReducedPresentation:
    """Quotient by the constant block, then by the annihilator.

    Generators are the ``quotient`` functionals; ``columns`` are linear
    columns keyed by ``(generator, variable)`` over ``nvars = n - 1``
    variables (or ``n`` without an annihilator).
    """

    nvars: int
    generators: int
    generator_degree: int
    columns: tuple[dict, ...]
    quotient: tuple[tuple, ...]


def reduce_presentation(p: GradedPresentation) -> ReducedPresentation:
    constraints = [dict(c) for c in p.constant if c]
    if constraints:
        quotient = exactla.solve_null_space(constraints, p.generators)
    else:
        quotient = [tuple(1 if i == j else 0 for i in range(p.generators)) for j in range(p.generators)]
    # substitution for the last variable when an annihilator is known
    sub = None
    nvars = p.n
    if p.annihilator is not None and p.n:
        a = [exactla._as_rational(x) for x in p.annihilator]
        last = a[-1]
        if not last:
            raise ValueError("annihilator must have a nonzero last coefficient")
        sub = {v: -Fraction(a[v]) / last for v in range(p.n - 1) if a[v]}
        nvars = p.n - 1
    cols = []
    for col in p.linear:
        out: dict = {}
        for (g, v), c in col.items():
            for i, lam in enumerate(quotient):
                w = lam[g]
                if not w:
                    continue
                if sub is not None and v == p.n - 1:
                    for u, s in sub.items():
                        out[(i, u)] = out.get((i, u), 0) + w * c * s
                else:
                    out[(i, v)] = out.get((i, v), 0) + w * c
        out = {key: exactla._as_rational(val) for key, val in out.items() if val}
        if out:
            cols.append(out)
    return ReducedPresentation(nvars, len(quotient), p.generator_degree, tuple(cols), tuple(quotient))


def reduced_vectors(r: ReducedPresentation, k: int) -> tuple[list[dict], int]:
    """Columns of the reduced Macaulay matrix in degree ``k`` and their length."""
    e = k - r.generator_degree
    if e < 0:
        return [], 0
    rows = poly_index(r.nvars, e)
    nrow = len(rows)
    vecs = []
    if e >= 1:
        for col in r.columns:
            items = list(col.items())
            for mono in poly_monomials(r.nvars, e - 1):
                vec: dict = {}
                for (g, v), c in items:
                    pos = g * nrow + rows[times_var(mono, v)]
                    vec[pos] = vec.get(pos, 0) + c
                vec = {i: c for i, c in vec.items() if c}
                if vec:
                    vecs.append(vec)
    return vecs, r.generators * nrow


# --------------------------------------------------------------------------
# Hilbert function


class AlexanderModule:
    """Degreewise data of a presented module, cached per degree.

    ``method="incremental"`` (default) builds ``B_{k+1}`` from ``B_k``: all
    relations of the reduced presentation sit one degree above the
    generators, so for ``k >= 3``

        B_{k+1} = (B_k ⊗ V) / <μ_j(b) ⊗ x_i - μ_i(b) ⊗ x_j : b ∈ B_{k-1}>,

    where V is spanned by the variables and ``μ_i: B_{k-1} -> B_k`` is
    multiplication by ``x_i``.  The quotients are taken with certified
    reduced forms, so the maps ``μ_i`` are exact and stay small.
    ``method="reduced"`` uses the reduced Macaulay matrix of each degree.
    """

    def __init__(self, p: GradedPresentation, strategy: RankStrategy = DEFAULT_STRATEGY,
                 method: str = "incremental"):
        if method not in ("incremental", "reduced"):
            raise ValueError(f"unknown method {method!r}")
        self.presentation = p
        self.strategy = strategy
        self.method = method
        self._reduced = None
        self._dims: dict[int, int] = {}
        self._forms: dict[int, exactla.ReducedForm] = {}
        self._mult: dict[int, list[list[dict]]] = {}

    @property
    def reduced(self) -> ReducedPresentation:
        if self._reduced is None:
            if self.presentation.annihilator is None:
                raise ValueError("the reduced route needs an annihilating linear form")
            self._reduced = reduce_presentation(self.presentation)
        return self._reduced

    def vectors(self, k: int) -> tuple[list[dict], int]:
        return reduced_vectors(self.reduced, k)

    def dim(self, k: int) -> int:
        if k < self.presentation.generator_degree:
            raise ValueError(f"B starts in degree {self.presentation.generator_degree}")
        if k not in self._dims:
            if self.method == "incremental":
                self._grow(k)
            elif k in self._forms:
                self._dims[k] = len(self._forms[k].free)
            else:
                vecs, length = self.vectors(k)
                self._dims[k] = length - exactla.vectors_rank(vecs, length, self.strategy)
        return self._dims[k]

    def multiplication(self, k: int) -> list[list[dict]]:
        """``mult[i][b]``: coordinates in ``B_{k+1}`` of ``x_i`` times the
        ``b``-th basis element of ``B_k`` (incremental bases)."""
        if k < self.presentation.generator_degree:
            raise ValueError(f"B starts in degree {self.presentation.generator_degree}")
        if k not in self._mult:
            self._grow(k + 1)
        return self._mult[k]

    def _grow(self, k: int) -> None:
        red = self.reduced
        g0 = red.generator_degree
        nv = red.nvars
        self._dims.setdefault(g0, red.generators)
        top = max(d for d in self._dims if d == g0 or d - 1 in self._mult)
        for d in range(top, k):
            # build B_{d+1} as a quotient of B_d ⊗ V
            size = self._dims[d]
            rels: list[dict] = []
            if d == g0:
                for col in red.columns:
                    vec: dict = {}
                    for (g, v), c in col.items():
                        vec[g * nv + v] = vec.get(g * nv + v, 0) + c
                    rels.append(vec)
            else:
                prev = self._mult[d - 1]
                for b in range(self._dims[d - 1]):
                    for i, j in itertools.combinations(range(nv), 2):
                        vec = {}
                        for t, c in prev[j][b].items():
                            vec[t * nv + i] = vec.get(t * nv + i, 0) + c
                        for t, c in prev[i][b].items():
                            vec[t * nv + j] = vec.get(t * nv + j, 0) - c
                        vec = {q: c for q, c in vec.items() if c}
                        if vec:
                            rels.append(vec)
            form = exactla.certified_reduced_form(rels, size * nv, self.strategy)
            where = {f: w for w, f in enumerate(form.free)}
            self._mult[d] = [
                [{where[q]: c for q, c in form.reduce({t * nv + i: 1}).items()} for t in range(size)]
                for i in range(nv)]
            self._dims[d + 1] = len(form.free)

    def reduced_form(self, k: int) -> exactla.ReducedForm:
        """Certified reduced echelon form of the Macaulay relations in degree ``k``."""
        if k not in self._forms:
            vecs, length = self.vectors(k)
            form = exactla.certified_reduced_form(vecs, length, self.strategy)
            self._forms[k] = form
            if k in self._dims and self._dims[k] != len(form.free):
                raise exactla.InvariantError(
                    f"dim B_{k}: rank computation gave {self._dims[k]}, reduced form {len(form.free)}")
            self._dims[k] = len(form.free)
        return self._forms[k]

    def row_position(self, k: int, generator: int, mono: tuple[int, ...]) -> int:
        e = k - self.presentation.generator_degree
        return generator * poly_dim(self.reduced.nvars, e) + poly_index(self.reduced.nvars, e)[mono]


def hilbert_b(p: GradedPresentation, k: int, strategy: RankStrategy = DEFAULT_STRATEGY,
              method: str = "incremental") -> int:
    """``dim B_k`` by the incremental route (default), the reduced Macaulay
    matrix (``"reduced"``) or the full Macaulay matrix (``"full"``)."""
    if k < p.generator_degree:
        raise ValueError(f"B starts in degree {p.generator_degree}; got k={k}")
    if method == "full":
        vecs, length = full_vectors(p, k)
        return length - exactla.vectors_rank(vecs, length, strategy)
    return AlexanderModule(p, strategy, method).dim(k)


@dataclass(frozen=True)
class ChenSequence:
    """Chen ranks ``θ_1 .. θ_kmax``."""

    theta: dict

    @property
    def kmax(self) -> int:
        return max(self.theta)

    def __getitem__(self, k: int) -> int:
        return self.theta[k]


def default_kmax(n: int) -> int:
    return min(2 * n, 12)


def chen_ranks(lc: LineCombinatorics, kmax: int | None = None,
               strategy: RankStrategy = DEFAULT_STRATEGY,
               module: AlexanderModule | None = None) -> ChenSequence:
    """``θ_1 = n`` and ``θ_k = dim B_k`` for ``2 <= k <= kmax``."""
    if kmax is None:
        kmax = default_kmax(lc.n)
    if kmax < 2:
        raise ValueError("kmax must be at least 2")
    mod = module or AlexanderModule(build_delta_lin(lc), strategy)
    theta = {1: lc.n}
    for k in range(2, kmax + 1):
        theta[k] = mod.dim(k)
    return ChenSequence(theta)


def free_group_chen(n: int, k: int) -> int:
    """Chen ranks of the free group: ``θ_1 = n``, ``θ_k = (k-1) C(k+n-2, k)``."""
    if n < 1 or k < 1:
        raise ValueError("rank and degree must be positive")
    if k == 1:
        return n
    return (k - 1) * math.comb(k + n - 2, k)
