"""Torsion of B supported at the maximal ideal, and the comparison with B′.

``H⁰_m(B)_k`` is the set of ``x ∈ B_k`` killed by some power of the
maximal ideal.  Degreewise it is approached by

    T_0(k) = 0,    T_d(k) = {x ∈ B_k : x_i x ∈ T_{d-1}(k+1) for every i},

so that ``T_d(k) = {x : x S_d = 0}``.  These spaces grow with ``d``.  The
variables are those of the reduced presentation; the eliminated one is a
combination of them, so they generate the maximal ideal.

The multiplication maps come from the module's certified incremental
bases, so torsion numbers are exact whatever rank strategy is in use.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import exactla
from .alexander import AlexanderModule
from .resonance import conjecture_rhs


def bprime_hilbert(h: dict, k: int) -> int:
    """``dim B′_k = sum_r h_r (k-1) C(r+k-1, k)``."""
    return conjecture_rhs(h, k)


@dataclass(frozen=True)
class TorsionValue:
    """``dim T_d(k)`` at the last window reached, and whether it settled."""

    k: int
    value: int
    window: int
    stabilized: bool
    history: tuple[int, ...]      # dim T_1(k), dim T_2(k), ...


class TorsionComputer:
    """Caches the quotient maps and the spaces ``T_d(k)`` of one module."""

    def __init__(self, module: AlexanderModule, max_degree: int | None = None):
        self.module = module
        self.max_degree = max_degree
        self._spaces: dict[tuple[int, int], list[dict]] = {}

    def multiplication(self, k: int) -> list[list[dict]]:
        """``mult[i][b]``: ``x_i`` times basis element ``b`` of ``B_k``, in ``B_{k+1}``."""
        return self.module.multiplication(k)

    def space(self, k: int, d: int) -> list[dict]:
        """Basis of ``T_d(k)`` in the coordinates of ``B_k``."""
        if d <= 0:
            return []
        key = (k, d)
        if key not in self._spaces:
            dim = self.module.dim(k)
            sub = self.space(k + 1, d - 1)
            size = self.module.dim(k + 1)
            # x lies in T_d(k) iff every x_i x vanishes modulo T_{d-1}(k+1)
            form = exactla.certified_reduced_form(sub, size) if sub else None
            constraints = []
            for cols in self.multiplication(k):
                images = [form.reduce(c) if form else c for c in cols]
                for t in range(size):
                    row = {b: img[t] for b, img in enumerate(images) if img.get(t)}
                    if row:
                        constraints.append(row)
            if constraints:
                basis = exactla.solve_null_space(constraints, dim)
            else:
                basis = [tuple(1 if a == b else 0 for a in range(dim)) for b in range(dim)]
            self._spaces[key] = [{a: v for a, v in enumerate(vec) if v} for vec in basis]
        return self._spaces[key]

    def h0(self, k: int, window: int = 4) -> TorsionValue:
        """``dim T_d(k)`` for ``d = 1, 2, ...`` up to ``window``, stopping once
        two consecutive values agree (from ``d = 2`` on)."""
        if k < self.module.presentation.generator_degree:
            raise ValueError("B starts in degree 2")
        if window < 1:
            raise ValueError("window must be at least 1")
        history: list[int] = []
        for d in range(1, window + 1):
            if self.max_degree is not None and k + d > self.max_degree:
                break
            history.append(len(self.space(k, d)))
            if len(history) >= 2 and history[-1] == history[-2]:
                return TorsionValue(k, history[-1], d, True, tuple(history))
        if not history:
            raise ValueError(f"degree {k + 1} exceeds the computed range")
        return TorsionValue(k, history[-1], len(history), False, tuple(history))


def h0_torsion(module: AlexanderModule, k: int, window: int = 4,
               max_degree: int | None = None) -> TorsionValue:
    """``dim H⁰_m(B)_k`` estimated through ``T_d(k)`` for ``d <= window``."""
    return TorsionComputer(module, max_degree).h0(k, window)


@dataclass(frozen=True)
class TorsionRow:
    k: int
    b: int
    bprime: int
    h0: int
    h1: int              # inferred: dim B′_k - dim B_k + dim H⁰_k
    stabilized: bool
    conjectural: bool = True

    @property
    def consistent(self) -> bool:
        return self.h1 >= 0


@dataclass(frozen=True)
class TorsionReport:
    rows: tuple[TorsionRow, ...]

    @property
    def failures(self) -> tuple[int, ...]:
        """Degrees with a negative inferred H¹, which contradict the conjecture."""
        return tuple(r.k for r in self.rows if not r.consistent)

    def row(self, k: int) -> TorsionRow:
        return next(r for r in self.rows if r.k == k)


def sheaf_sequence_report(b_dims: dict, bprime_dims: dict, h0_dims: dict,
                          stabilized: dict | None = None) -> TorsionReport:
    """Tabulate ``H¹_k = B′_k - B_k + H⁰_k`` on the common degree range.

    The inference rests on the conjectured equality of sheaves, so every row
    is flagged conjectural; negative values are kept, not clamped.
    """
    ks = sorted(set(b_dims) & set(bprime_dims) & set(h0_dims))
    rows = []
    for k in ks:
        for name, table in (("B", b_dims), ("B′", bprime_dims), ("H⁰", h0_dims)):
            if table[k] < 0:
                raise ValueError(f"dim {name}_{k} is negative")
        rows.append(TorsionRow(k, b_dims[k], bprime_dims[k], h0_dims[k],
                               bprime_dims[k] - b_dims[k] + h0_dims[k],
                               True if stabilized is None else stabilized.get(k, False)))
    return TorsionReport(tuple(rows))


def torsion_report(module: AlexanderModule, h: dict, k_range, window: int = 4,
                   max_degree: int | None = None) -> TorsionReport:
    """H⁰, B′ and inferred H¹ for every ``k`` in ``k_range``."""
    comp = TorsionComputer(module, max_degree)
    b, bp, h0, stab = {}, {}, {}, {}
    for k in k_range:
        val = comp.h0(k, window)
        b[k] = module.dim(k)
        bp[k] = bprime_hilbert(h, k)
        h0[k] = val.value
        stab[k] = val.stabilized
    return sheaf_sequence_report(b, bp, h0, stab)
