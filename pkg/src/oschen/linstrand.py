"""Graded Betti numbers of A over the exterior algebra, by strand homology.

``Tor^E_i(A, k)_j`` is the homology of the internal-degree-``j`` strand of
the Cartan complex

    A_0 ⊗ S_j -> A_1 ⊗ S_{j-1} -> ... -> A_r ⊗ S_{j-r},
    a ⊗ f  |->  sum_l (e_l a) ⊗ ∂f/∂x_l,

taken at position ``p = j - i``.  In characteristic 0 divided powers and
symmetric powers coincide, so formal partial derivatives do the job.

The module also checks exactness of the complex with differential
``a ⊗ f -> sum_l e_l a ⊗ x_l f`` and reports the complexity of A.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy import sparse

from . import _kernel, exactla
from .alexander import poly_dim, poly_index, poly_monomials
from .combinatorics import LineCombinatorics, Matroid
from .exactla import DEFAULT_STRATEGY, InvariantError, RankStrategy
from .osalgebra import complement, decone_action, decone_complement, generator_action


def _regularity_window(m: Matroid) -> int:
    # A is (rank - 1)-regular: beta_{i,j} vanishes for j > i + rank - 1
    return max(m.rank - 1, 0)


# --------------------------------------------------------------------------
# Cartan strands


@dataclass(frozen=True)
class _Model:
    """Graded pieces and generator action of the algebra whose Tor is taken."""

    nvars: int
    dims: tuple[int, ...]
    action: object      # p -> action[l][i] as in generator_action


def _model(m: Matroid, model: str) -> _Model:
    if model == "full" or m.n == 0:
        return _Model(m.n, tuple(complement(m, p).dim for p in range(m.rank + 1)),
                      lambda p: generator_action(m, p))
    if model == "decone":
        dims = tuple(decone_complement(m, p).dim for p in range(m.rank + 1))
        return _Model(m.n - 1, dims, lambda p: decone_action(m, p))
    raise ValueError(f"unknown model {model!r}")


def cartan_columns(m: Matroid, j: int, p: int, model: str = "decone") -> tuple[list[dict], int]:
    """Columns of ``d: A_p ⊗ S_{j-p} -> A_{p+1} ⊗ S_{j-p-1}`` and the target size."""
    return _cartan_columns(_model(m, model), j, p)


def _cartan_columns(md: _Model, j: int, p: int) -> tuple[list[dict], int]:
    q = j - p
    n = md.nvars
    top = len(md.dims) - 1
    if p < 0 or q < 0 or p > top:
        return [], 0
    src_dim = md.dims[p]
    tgt_dim = md.dims[p + 1] if p + 1 <= top else 0
    if q == 0 or tgt_dim == 0:
        return [dict() for _ in range(src_dim * poly_dim(n, q))], tgt_dim * poly_dim(n, q - 1)
    action = md.action(p)
    tidx = poly_index(n, q - 1)
    tsize = len(tidx)
    # derivative terms of each source monomial, shared by every A_p basis element
    derivs = []
    for mono in poly_monomials(n, q):
        terms = []
        prev = -1
        for t, l in enumerate(mono):
            if l != prev:
                prev = l
                terms.append((l, mono.count(l), tidx[mono[:t] + mono[t + 1:]]))
        derivs.append(terms)
    cols = []
    for ia in range(src_dim):
        acts = [action[l][ia] for l in range(n)]
        for terms in derivs:
            vec: dict[int, object] = {}
            for l, mult, r in terms:
                for ib, c in acts[l].items():
                    pos = ib * tsize + r
                    vec[pos] = vec.get(pos, 0) + mult * c
            cols.append({k: v for k, v in vec.items() if v})
    return cols, tgt_dim * tsize


@dataclass(frozen=True)
class StrandComplex:
    """Dimensions and differential ranks of one internal-degree strand.

    ``ranks[p]`` is None for differentials that were not computed;
    ``certified[p]`` says whether that rank is proven over Q.
    """

    j: int
    dims: tuple[int, ...]         # dims[p] = dim A_p ⊗ S_{j-p}
    ranks: tuple                  # ranks[p] = rank of d_p
    certified: tuple = ()

    def homology(self, p: int) -> int:
        if p < 0 or p >= len(self.dims):
            return 0
        out = self.ranks[p - 1] if p >= 1 else 0
        if out is None or self.ranks[p] is None:
            raise ValueError(f"position {p} of strand {self.j} was not computed")
        return self.dims[p] - self.ranks[p] - out

    def homology_certified(self, p: int) -> bool:
        if not self.certified or p < 0 or p >= len(self.dims):
            return True
        return bool(self.certified[p]) and (p == 0 or bool(self.certified[p - 1]))

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * d for p, d in enumerate(self.dims))


def _to_sparse(cols: list[dict], length: int):
    data, rows, cidx = [], [], []
    for c, col in enumerate(cols):
        for r, v in col.items():
            rows.append(r)
            cidx.append(c)
            data.append(v)
    return sparse.csr_matrix((np.array(data, dtype=np.int64), (rows, cidx)), shape=(length, len(cols)))


def composite_is_zero(first: list[dict], mid: int, second: list[dict], length: int) -> bool:
    """True iff ``second ∘ first`` vanishes (column lists, ``mid`` = middle size)."""
    if not first or not second:
        return True
    entries = [v for col in first + second for v in col.values()]
    if all(isinstance(v, int) for v in entries) and max(map(abs, entries), default=0) < (1 << 20):
        prod = _to_sparse(second, length) @ _to_sparse(first, mid)
        prod.eliminate_zeros()
        return prod.nnz == 0
    for col in first:
        img: dict[int, object] = {}
        for t, c in col.items():
            for s, v in second[t].items():
                img[s] = img.get(s, 0) + c * v
        if any(img.values()):
            return False
    return True


# the verify lift produces (length - rank) dense vectors; beyond this many
# entries strand ranks are certified only by the cheap arguments below
VERIFY_BUDGET = 5_000_000


def strand_complex(m: Matroid, j: int, strategy: RankStrategy = DEFAULT_STRATEGY,
                   check: bool = True, model: str = "decone",
                   positions: tuple[int, int] | None = None) -> StrandComplex:
    """The internal-degree-``j`` strand.

    ``model="decone"`` (default) works with ``A/(e_0)`` over ``n - 1``
    variables, which has the same Tor; ``model="full"`` uses A itself.
    ``positions=(lo, hi)`` restricts the work to what homology at positions
    ``lo .. hi`` needs.  With ``check`` every composite of consecutive
    assembled differentials is verified to vanish.

    Under the ``verify`` strategy ranks are first taken mod p.  A mod-p rank
    is proven when it is the largest possible, or when it meets the upper
    bound ``dim C_{p+1} - rank d_{p+1}`` (or ``dim C_p - rank d_{p-1}``)
    that ``d∘d = 0`` gives; otherwise exact elimination or the certified
    lift (within ``VERIFY_BUDGET``) settles it.
    """
    md = _model(m, model)
    top = min(j, len(md.dims) - 1)
    dims = [md.dims[p] * poly_dim(md.nvars, j - p) for p in range(top + 1)]
    lo, hi = (0, top) if positions is None else positions
    span = range(max(lo - 1, 0), min(hi, top) + 1)
    first = strategy if strategy.mode != "verify" else replace(strategy, mode="modular")
    ranks: list = [None] * (top + 1)
    sizes: dict[int, tuple[int, int]] = {}
    prev = None
    for p in span:
        cols, length = _cartan_columns(md, j, p)
        if check and prev is not None and not composite_is_zero(prev[0], prev[1], cols, length):
            raise InvariantError(f"d∘d != 0 in strand j={j} at position {p - 1}")
        ranks[p] = exactla.vectors_rank(cols, length, first) if length else 0
        sizes[p] = (len(cols), length)
        prev = (cols, length) if check else None
        del cols
    certified: list = [strategy.mode == "exact" if r is not None else None for r in ranks]
    if strategy.mode == "verify":
        int64_kernel = strategy.compiled is not False and _kernel.integer_echelon_class() is not None
        for p in span:
            ncols, length = sizes[p]
            bounds = [min(ncols, length)]
            if check and p + 1 < len(dims) and ranks[p + 1] is not None:
                bounds.append(dims[p + 1] - ranks[p + 1])
            if check and p >= 1 and ranks[p - 1] is not None:
                bounds.append(dims[p] - ranks[p - 1])
            certified[p] = ranks[p] == min(bounds)
        for p in span:
            if certified[p]:
                continue
            cols, length = _cartan_columns(md, j, p)
            # 64-bit fraction-free elimination is often cheap; else the lift.
            # Without the compiled kernel, Python-integer elimination stands in.
            exact = exactla.exact_rank(cols, length, compiled=strategy.compiled,
                                       fallback=not int64_kernel)
            if exact is None and (length - ranks[p]) * length <= VERIFY_BUDGET:
                exact = exactla.vectors_rank(cols, length, strategy)
            if exact is not None:
                # a disagreement means an unlucky prime; the exact value wins
                ranks[p] = exact
                certified[p] = True
    return StrandComplex(j, tuple(dims), tuple(ranks), tuple(certified))


def strand_homology(m: Matroid, i: int, j: int, strategy: RankStrategy = DEFAULT_STRATEGY,
                    model: str = "decone") -> int:
    """``β_{i,j} = dim Tor^E_i(A, k)_j``."""
    if i < 0 or j < i:
        return 0
    return strand_complex(m, j, strategy, model=model).homology(j - i)


# --------------------------------------------------------------------------
# Betti tables


@dataclass(frozen=True)
class BettiTable:
    """``β_{i,j}`` for ``i <= imax`` and ``i <= j <= i + window + 1``.

    ``beta`` stores every computed entry, including the ones beyond the
    regularity window, which are checked to vanish.  ``uncertified`` lists
    entries whose ranks are only known modulo a prime.
    """

    imax: int
    window: int
    beta: dict
    uncertified: tuple = ()

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.beta.get(key, 0)

    @property
    def certified(self) -> bool:
        return not self.uncertified

    def linear_strand(self) -> dict[int, int]:
        return {i: self[i, i + 1] for i in range(1, self.imax + 1)}


def betti_table(m: Matroid, imax: int, strategy: RankStrategy = DEFAULT_STRATEGY,
                check: bool = True, model: str = "decone") -> BettiTable:
    """All ``β_{i,j}`` with ``i <= imax`` and ``j <= i + window + 1``.

    ``window = rank - 1`` is the regularity bound; the extra diagonal
    ``j = i + window + 1`` is computed and must vanish.
    """
    if imax < 1:
        raise ValueError("imax must be at least 1")
    w = _regularity_window(m)
    beta: dict[tuple[int, int], int] = {}
    loose = []
    for j in range(0, imax + w + 2):
        ilo, ihi = max(0, j - w - 1), min(j, imax)
        strand = strand_complex(m, j, strategy, check, model, positions=(j - ihi, j - ilo))
        for i in range(ilo, ihi + 1):
            beta[(i, j)] = strand.homology(j - i)
            if strategy.mode != "modular" and not strand.homology_certified(j - i):
                loose.append((i, j))
    for (i, j), v in beta.items():
        if j > i + w and v:
            raise InvariantError(f"regularity fails: beta_{i},{j} = {v}")
        if i >= 1 and i == j and v:
            raise InvariantError(f"beta_{i},{i} = {v} should vanish")
    return BettiTable(imax, w, beta, tuple(loose))


def cross_check_chen(theta, table: BettiTable, kmax: int) -> bool:
    """``θ_k = β_{k-1,k}`` for ``2 <= k <= kmax``; raises on mismatch."""
    for k in range(2, kmax + 1):
        if k - 1 > table.imax:
            break
        if theta[k] != table[k - 1, k]:
            raise InvariantError(f"Chen rank theta_{k} = {theta[k]} but beta_{k - 1},{k} = {table[k - 1, k]}")
    return True


# --------------------------------------------------------------------------
# EPY complex


def epy_columns(m: Matroid, q: int, p: int) -> tuple[list[dict], int]:
    """Columns of ``A_p ⊗ S_q -> A_{p+1} ⊗ S_{q+1}``, ``a ⊗ f -> sum_l e_l a ⊗ x_l f``."""
    n = m.n
    if p < 0 or q < 0 or p + 1 > m.rank:
        return [], 0
    action = generator_action(m, p)
    src_dim = complement(m, p).dim
    tgt_dim = complement(m, p + 1).dim
    tidx = poly_index(n, q + 1)
    tsize = len(tidx)
    cols = []
    for ia in range(src_dim):
        for mono in poly_monomials(n, q):
            vec: dict[int, object] = {}
            for l in range(n):
                r = tidx[tuple(sorted(mono + (l,)))]
                for ib, c in action[l][ia].items():
                    pos = ib * tsize + r
                    vec[pos] = vec.get(pos, 0) + c
            cols.append({k: v for k, v in vec.items() if v})
    return cols, tgt_dim * tsize


@dataclass(frozen=True)
class EpyReport:
    exact: bool
    failures: tuple   # (D, p, homology) where exactness fails


def epy_exactness(m: Matroid, degree_bound: int, strategy: RankStrategy = DEFAULT_STRATEGY) -> EpyReport:
    """Exactness of ``0 -> A_0 ⊗ S -> ... -> A_r ⊗ S`` at every ``A_p ⊗ S``
    with ``p < r``, in every strand whose top term ``A_r ⊗ S_D`` has
    ``D <= degree_bound``.

    Ranks are taken mod p first.  Rational ranks are at least as large, so
    with ``d∘d = 0`` checked exactly, vanishing mod-p homology proves
    vanishing rational homology; only apparent failures are recomputed with
    ``strategy``.
    """
    if degree_bound < 0:
        raise ValueError("degree bound must be nonnegative")
    r = m.rank
    first = strategy if strategy.mode == "exact" else replace(strategy, mode="modular")
    failures = []
    for D in range(degree_bound + 1):
        # strand terms A_p ⊗ S_{D - r + p}
        ranks: dict[int, int] = {}
        prev = None
        for p in range(r):
            q = D - r + p
            if q < 0:
                ranks[p] = 0
                continue
            cols, length = epy_columns(m, q, p)
            if prev is not None and not composite_is_zero(prev[0], prev[1], cols, length):
                raise InvariantError(f"EPY differential does not square to zero (D={D}, p={p - 1})")
            ranks[p] = exactla.vectors_rank(cols, length, first) if length else 0
            prev = (cols, length)

        def homology(p):
            dim = complement(m, p).dim * poly_dim(m.n, D - r + p)
            return dim - ranks[p] - (ranks[p - 1] if p >= 1 else 0)

        suspects = [p for p in range(r) if D - r + p >= 0 and homology(p)]
        if suspects and first is not strategy:
            for p in {x for s in suspects for x in (s - 1, s) if x >= 0 and D - r + x >= 0}:
                cols, length = epy_columns(m, D - r + p, p)
                ranks[p] = exactla.vectors_rank(cols, length, strategy) if length else 0
        for p in range(r):
            if D - r + p >= 0 and homology(p):
                failures.append((D, p, homology(p)))
    return EpyReport(not failures, tuple(failures))


# --------------------------------------------------------------------------
# complexity


@dataclass(frozen=True)
class ComplexityReport:
    cx: int
    dim_r1: int
    fitted_degree: int | None


def complexity(lc: LineCombinatorics) -> int:
    """``n - 2`` for a near-pencil, ``n - 1`` otherwise."""
    return lc.n - 2 if lc.is_near_pencil() else lc.n - 1


def complexity_report(lc: LineCombinatorics, h: dict, fit, check: bool = True) -> ComplexityReport:
    """Complexity, dimension of R¹ (-1 when empty) and fitted degree.

    With ``check`` (and a fit available) the fitted degree must equal the
    dimension of R¹.
    """
    dim_r1 = max((r for r, c in h.items() if c), default=-1)
    degree = fit.degree if fit is not None else None
    if check and degree is not None and degree != dim_r1:
        raise InvariantError(f"fitted Hilbert polynomial degree {degree} differs from dim R1 = {dim_r1}")
    return ComplexityReport(complexity(lc), dim_r1, degree)
