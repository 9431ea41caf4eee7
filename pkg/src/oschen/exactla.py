"""Exact linear algebra over the rationals, with a certified modular fast path.

Every rank and kernel in the package goes through this module.  Rationals are
:class:`fractions.Fraction` values (Python ``int`` is accepted wherever a
rational is expected).  Three rank strategies exist:

``exact``
    fraction-free integer elimination, no modular arithmetic at all;
``modular``
    rank over GF(p) for one random prime p > 2**31, a lower bound for the
    rational rank that is equal to it with overwhelming probability;
``verify``
    the modular rank plus an exact certificate: the mod-p null space is
    lifted to the rationals and checked, which proves the upper bound.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernel
from ._kernel import echelon_class

Rational = Fraction

PRIME_FLOOR = 1 << 31
PRIME_CEIL = 1 << 32


class ResourceLimitError(RuntimeError):
    """A computation would exceed its configured size budget."""


class InvariantError(RuntimeError):
    """A mathematical cross-check failed; signals a bug or bad input."""


class PrimeCollision(ArithmeticError):
    """The chosen prime divides a denominator or failed certification."""


# --------------------------------------------------------------------------
# primes


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(rng: random.Random) -> int:
    """A uniformly drawn prime in [2**31, 2**32)."""
    while True:
        n = rng.randrange(PRIME_FLOOR + 1, PRIME_CEIL, 2)
        if is_prime(n):
            return n


# --------------------------------------------------------------------------
# strategies


@dataclass(frozen=True)
class RankStrategy:
    """How ranks are computed.

    ``mode`` is ``"exact"``, ``"modular"`` or ``"verify"``.  ``prime`` pins
    the modulus for the modular modes; otherwise primes are drawn from
    ``seed``.
    """

    mode: str = "verify"
    seed: int = 0
    prime: int | None = None
    max_retries: int = 6
    exact_limit: int | None = None
    compiled: bool | None = None

    def __post_init__(self):
        if self.mode not in ("exact", "modular", "verify"):
            raise ValueError(f"unknown rank strategy {self.mode!r}")
        if self.prime is not None:
            if not (PRIME_FLOOR < self.prime < PRIME_CEIL) or not is_prime(self.prime):
                raise ValueError("prime must be a prime in (2**31, 2**32)")

    def primes(self):
        """Infinite deterministic stream of moduli for this strategy."""
        rng = random.Random(self.seed)
        if self.prime is not None:
            yield self.prime
        while True:
            yield random_prime(rng)


EXACT = RankStrategy("exact")
DEFAULT_STRATEGY = RankStrategy("verify")


# --------------------------------------------------------------------------
# sparse matrices


def _as_rational(x) -> int | Fraction:
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        return x
    if isinstance(x, str):
        return _as_rational(Fraction(x))
    if isinstance(x, (np.integer,)):
        return int(x)
    raise TypeError(f"not an exact rational: {x!r}")


@dataclass(frozen=True, eq=False)
class SparseMatrix:
    """Column-major sparse matrix of exact rationals; absent entries are zero."""

    rows: int
    cols: int
    columns: tuple = field(repr=False)

    def __post_init__(self):
        if len(self.columns) != self.cols:
            raise ValueError("column count mismatch")
        clean = []
        for col in self.columns:
            c = {}
            for r, v in col.items():
                if not 0 <= r < self.rows:
                    raise IndexError(f"row index {r} out of range")
                v = _as_rational(v)
                if v:
                    c[r] = v
            clean.append(c)
        object.__setattr__(self, "columns", tuple(clean))

    @classmethod
    def from_columns(cls, rows: int, columns: Iterable[Mapping[int, object]]) -> "SparseMatrix":
        columns = tuple(dict(c) for c in columns)
        return cls(rows, len(columns), columns)

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[object]], cols: int | None = None) -> "SparseMatrix":
        nrows = len(dense)
        ncols = len(dense[0]) if nrows else (cols or 0)
        columns = [{} for _ in range(ncols)]
        for i, row in enumerate(dense):
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            for j, v in enumerate(row):
                if v:
                    columns[j][i] = v
        return cls(nrows, ncols, tuple(columns))

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Mapping[tuple[int, int], object]) -> "SparseMatrix":
        columns = [{} for _ in range(cols)]
        for (i, j), v in entries.items():
            if not 0 <= j < cols:
                raise IndexError(f"column index {j} out of range")
            columns[j][i] = v
        return cls(rows, cols, tuple(columns))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols, tuple({} for _ in range(cols)))

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, tuple({i: 1} for i in range(n)))

    @property
    def entries(self) -> dict[tuple[int, int], object]:
        return {(i, j): v for j, col in enumerate(self.columns) for i, v in col.items()}

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def row_vectors(self) -> list[dict[int, object]]:
        rows = [{} for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                rows[i][j] = v
        return rows

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, tuple(self.row_vectors()))

    def to_dense(self) -> list[list[object]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.columns) == (other.rows, other.cols, other.columns)

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(sorted(c.items())) for c in self.columns)))


# --------------------------------------------------------------------------
# exact elimination


def _primitive(vec: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in vec.values():
        g = math.gcd(g, v)
        if g == 1:
            return vec
    if g > 1:
        return {k: v // g for k, v in vec.items()}
    return vec


def _integral(vec: Mapping[int, object]) -> dict[int, int]:
    """Scale a rational vector to a primitive integer vector (same span)."""
    den = 1
    for v in vec.values():
        if isinstance(v, Fraction):
            den = den * v.denominator // math.gcd(den, v.denominator)
    out = {}
    for k, v in vec.items():
        iv = int(v * den) if isinstance(v, Fraction) else v * den
        if iv:
            out[k] = iv
    return _primitive(out)


def _order(vectors: Sequence[Mapping]) -> list[int]:
    # fewest nonzeros first, then lowest index
    return sorted(range(len(vectors)), key=lambda i: (len(vectors[i]), i))


def exact_echelon(vectors: Sequence[Mapping[int, object]], limit: int | None = None) -> dict[int, dict[int, int]]:
    """Fraction-free echelon form: pivot position -> primitive integer row.

    Each stored row has its support at or after its pivot.  Reduction of a
    vector ``v`` by a row ``r`` with pivot ``q`` is ``r[q]*v - v[q]*r``
    followed by removal of the content, so entries stay integral.
    """
    pivots: dict[int, dict[int, int]] = {}
    work = 0
    for i in _order(vectors):
        v = _integral(vectors[i])
        while v:
            q = min(v)
            row = pivots.get(q)
            if row is None:
                pivots[q] = v
                break
            a, b = row[q], v[q]
            g = math.gcd(a, b)
            a, b = a // g, b // g
            new = {k: a * x for k, x in v.items()}
            for k, x in row.items():
                y = new.get(k, 0) - b * x
                if y:
                    new[k] = y
                else:
                    new.pop(k, None)
            v = _primitive(new)
            work += len(row)
            if limit is not None and work > limit:
                raise ResourceLimitError(
                    f"exact elimination exceeded {limit} operations; use a modular strategy")
    return pivots


_I64_SAFE = 1 << 62


def exact_rank(vectors: Sequence[Mapping[int, object]], length: int,
               limit: int | None = None, compiled: bool | None = None,
               fallback: bool = True) -> int | None:
    """Rank over Q by fraction-free elimination.

    The compiled 64-bit kernel runs first when available; on overflow the
    computation is redone with Python integers, or None is returned when
    ``fallback`` is off.
    """
    cls = None if compiled is False else _kernel.integer_echelon_class()
    if compiled and cls is None:
        raise RuntimeError("compiled kernel is not available")
    if cls is not None:
        ints = [_integral(v) for v in vectors]
        if all(abs(x) < _I64_SAFE for v in ints for x in v.values()):
            order = _order(ints)
            indptr = [0]
            indices: list[int] = []
            data: list[int] = []
            for i in order:
                for k in sorted(ints[i]):
                    indices.append(k)
                    data.append(ints[i][k])
                indptr.append(len(indices))
            ech = cls(length)
            try:
                ech.add_vectors(np.array(indptr, dtype=np.int64), np.array(indices, dtype=np.int64),
                                np.array(data, dtype=np.int64))
                return ech.rank
            except OverflowError:
                pass
    if not fallback:
        return None
    return len(exact_echelon(vectors, limit))


def _rref_exact(vectors: Sequence[Mapping[int, object]], length: int) -> list[dict[int, Fraction]]:
    """Reduced row echelon basis of the span, rows ordered by pivot."""
    piv = exact_echelon(vectors)
    order = sorted(piv)
    reduced: dict[int, dict[int, Fraction]] = {}
    for q in reversed(order):
        row = piv[q]
        lead = row[q]
        out = {k: Fraction(v, lead) for k, v in row.items()}
        for k in sorted(out):
            if k != q and k in reduced and out.get(k):
                c = out[k]
                for kk, vv in reduced[k].items():
                    y = out.get(kk, 0) - c * vv
                    if y:
                        out[kk] = y
                    else:
                        out.pop(kk, None)
        reduced[q] = {k: _as_rational(v) for k, v in out.items()}
    return [reduced[q] for q in order]


# --------------------------------------------------------------------------
# modular elimination


def _to_csr(vectors: Sequence[Mapping[int, object]], order: Sequence[int], p: int):
    indptr = np.zeros(len(order) + 1, dtype=np.int64)
    indices = []
    data = []
    for t, i in enumerate(order):
        vec = vectors[i]
        for k in sorted(vec):
            v = vec[k]
            if isinstance(v, Fraction):
                d = v.denominator % p
                if d == 0:
                    raise PrimeCollision(f"prime {p} divides a denominator")
                r = v.numerator * pow(d, -1, p) % p
            else:
                r = v % p
            if r:
                indices.append(k)
                data.append(r)
        indptr[t + 1] = len(indices)
    return indptr, np.array(indices, dtype=np.int64), np.array(data, dtype=np.uint64)


def modular_echelon(vectors: Sequence[Mapping[int, object]], length: int, p: int, compiled: bool | None = None):
    """Echelon form of ``vectors`` over GF(p) using the selected kernel."""
    ech = echelon_class(compiled)(length, p)
    order = _order(vectors)
    indptr, indices, data = _to_csr(vectors, order, p)
    ech.add_vectors(indptr, indices, data)
    return ech


def _symmetric(x: int, m: int) -> int:
    x %= m
    return x - m if x > m // 2 else x


def rational_reconstruct(a: int, m: int) -> Fraction | None:
    """Smallest fraction n/d with n = a*d (mod m), |n|, d <= sqrt(m/2)."""
    a %= m
    bound = math.isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if math.gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def _lift_entries(combined: np.ndarray, M: int):
    """Rational lifts of ``-combined`` modulo ``M``; None if any entry fails."""
    bound = math.isqrt(M // 2)
    out = np.empty(combined.shape, dtype=object)
    if combined.dtype != object and M < (1 << 62):
        neg = (M - combined.astype(np.int64)) % M
        sym = np.where(neg > M // 2, neg - M, neg)
        small = np.abs(sym) <= min(bound, 1 << 40)
        out[small] = sym[small].astype(object)
        todo = np.argwhere(~small)
    else:
        todo = np.argwhere(np.ones(combined.shape, dtype=bool))
    for t, w in todo:
        c = int(combined[t, w])
        if c % M == 0:
            out[t, w] = 0
            continue
        fr = rational_reconstruct(-c, M)
        if fr is None:
            return None
        out[t, w] = _as_rational(fr)
    return out


def _check_prime_stream():
    q = (1 << 24) - 3
    while True:
        if is_prime(q):
            yield q
        q -= 2


def _exact_zero_product(vectors: Sequence[dict[int, int]], length: int, X: list[dict[int, int]]) -> bool:
    """True iff <v, x> == 0 over Z for every integer vector v and column x."""
    if not X or not vectors:
        return True
    vectors = [v for v in vectors if v]
    if not vectors:
        return True
    vmax = max(abs(c) for v in vectors for c in v.values())
    xmax = max((abs(c) for x in X for c in x.values()), default=0)
    width = max(len(v) for v in vectors)
    bound = vmax * xmax * width
    starts = np.zeros(len(vectors), dtype=np.int64)
    idx = []
    for t, v in enumerate(vectors):
        starts[t] = len(idx)
        idx.extend(v)
    idx = np.array(idx, dtype=np.int64)
    vals = [c for v in vectors for c in v.values()]
    if bound < (1 << 62):
        moduli = [None]
    else:
        moduli, prod = [], 1
        for q in _check_prime_stream():
            moduli.append(q)
            prod *= q
            if prod > 2 * bound:
                break
    for q in moduli:
        if q is None:
            vv = np.array(vals, dtype=np.int64)
        else:
            vv = np.array([c % q for c in vals], dtype=np.int64)
        for x in X:
            dense = np.zeros(length, dtype=np.int64)
            for k, c in x.items():
                dense[k] = c if q is None else c % q
            prods = vv * dense[idx]
            if q is not None:
                prods %= q
            acc = np.add.reduceat(prods, starts)
            if q is not None:
                acc %= q
            if np.any(acc):
                return False
    return True


def _certify_null_space(vectors, length, piv, free, residues_by_prime):
    """Lift mod-p null spaces to Q and check them; return lifted basis or None."""
    nfree = len(free)
    if nfree == 0:
        return []
    combined, M = None, 1
    for p, R in residues_by_prime:
        if combined is None:
            combined, M = R, p
        else:
            inv = pow(M, -1, p)
            a = combined.astype(object)
            combined = a + M * (((R.astype(object) - a) * inv) % p)
            M *= p
    lifted = _lift_entries(combined, M) if len(piv) else np.empty((0, nfree), dtype=object)
    if lifted is None:
        return None
    basis = []
    for w in range(nfree):
        vec = {int(free[w]): 1}
        col = lifted[:, w]
        for t in np.nonzero(col != 0)[0]:
            vec[int(piv[t])] = col[t]
        basis.append(vec)
    ints = [_integral(v) for v in vectors]
    if not _exact_zero_product(ints, length, [_integral(x) for x in basis]):
        return None
    return basis


def _modular_rank_certified(vectors, length, strategy: RankStrategy):
    best = None
    residues = []
    tried = 0
    for p in strategy.primes():
        tried += 1
        if tried > strategy.max_retries:
            break
        try:
            ech = modular_echelon(vectors, length, p, strategy.compiled)
        except PrimeCollision:
            continue
        piv = ech.pivots()
        free, R = ech.reduced_form()
        key = tuple(piv.tolist())
        if best is None or len(key) > len(best):
            best, residues = key, []
        elif key != best:
            continue
        residues.append((p, R))
        lifted = _certify_null_space(vectors, length, piv, free, residues)
        if lifted is not None:
            return len(piv), lifted, piv.tolist(), free.tolist()
    return None


# --------------------------------------------------------------------------
# public operations


def _orient(m: SparseMatrix) -> tuple[list[dict], int]:
    """Choose the shorter vector orientation: columns (length rows) or rows."""
    if m.rows <= m.cols:
        return list(m.columns), m.rows
    return m.row_vectors(), m.cols


def vectors_rank(vectors: Sequence[Mapping[int, object]], length: int,
                 strategy: RankStrategy = DEFAULT_STRATEGY) -> int:
    """Rank of a family of sparse vectors of the given length."""
    if not vectors or length == 0:
        return 0
    if strategy.mode == "exact":
        return exact_rank(vectors, length, strategy.exact_limit, strategy.compiled)
    if strategy.mode == "modular":
        for p in strategy.primes():
            try:
                return modular_echelon(vectors, length, p, strategy.compiled).rank
            except PrimeCollision:
                continue
    result = _modular_rank_certified(vectors, length, strategy)
    if result is not None:
        return result[0]
    # certification failed for every prime tried: fall back to exact
    return exact_rank(vectors, length, strategy.exact_limit, strategy.compiled)


def rank(m: SparseMatrix, strategy: RankStrategy = DEFAULT_STRATEGY) -> int:
    """Rank of ``m`` over Q (``modular``: over GF(p))."""
    vectors, length = _orient(m)
    return vectors_rank(vectors, length, strategy)


def rref_canonical(vectors: Sequence[Sequence[object]] | Sequence[Mapping[int, object]],
                   length: int | None = None) -> list[tuple]:
    """Canonical reduced row echelon basis of the span of ``vectors``.

    Accepts dense sequences or sparse ``{index: value}`` mappings (then
    ``length`` is required) and returns dense tuples.  Two spanning sets of
    the same subspace give identical output.
    """
    sparse, length = _sparsify(vectors, length)
    rows = _rref_exact(sparse, length)
    return [_densify(r, length) for r in rows]


def kernel_basis(m: SparseMatrix) -> list[tuple]:
    """Basis of the right null space of ``m`` in canonical RREF form."""
    rows = [dict(r) for r in m.row_vectors() if r]
    rref = _rref_exact(rows, m.cols)
    pivots = {min(r): r for r in rref}
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for f in free:
        vec = [0] * m.cols
        vec[f] = 1
        for q, r in pivots.items():
            c = r.get(f)
            if c:
                vec[q] = -c
        basis.append(tuple(vec))
    return rref_canonical(basis, m.cols) if basis else []


def left_kernel_basis(m: SparseMatrix) -> list[tuple]:
    return kernel_basis(m.transpose())


def _sparsify(vectors, length):
    sparse = []
    for v in vectors:
        if isinstance(v, Mapping):
            if length is None:
                raise ValueError("length is required for sparse input")
            sparse.append({k: _as_rational(x) for k, x in v.items() if x})
        else:
            if length is None:
                length = len(v)
            elif len(v) != length:
                raise ValueError("vectors of unequal length")
            sparse.append({k: _as_rational(x) for k, x in enumerate(v) if x})
    return sparse, (length or 0)


def _densify(vec: Mapping[int, object], length: int) -> tuple:
    out = [0] * length
    for k, v in vec.items():
        out[k] = v
    return tuple(out)


def span_dimension(vectors, length: int | None = None) -> int:
    sparse, length = _sparsify(vectors, length)
    return len(exact_echelon(sparse))


def subspace_contains(big: Sequence[Sequence[object]], small: Sequence[Sequence[object]]) -> bool:
    """True iff span(small) is contained in span(big)."""
    if not small:
        return True
    return span_dimension(list(big) + list(small)) == span_dimension(big)


def subspace_intersection_dim(a: Sequence[Sequence[object]], b: Sequence[Sequence[object]]) -> int:
    if not a or not b:
        return 0
    return span_dimension(a) + span_dimension(b) - span_dimension(list(a) + list(b))


def solve_null_space(constraints: Sequence[Mapping[int, object]], length: int) -> list[tuple]:
    """Canonical basis of {x : <c, x> = 0 for every constraint c}."""
    m = SparseMatrix.from_columns(length, constraints).transpose() if constraints else SparseMatrix.zero(0, length)
    if not constraints:
        return [tuple(1 if i == j else 0 for i in range(length)) for j in range(length)]
    return kernel_basis(m)


@dataclass(frozen=True)
class ReducedForm:
    """Exact reduced row echelon form of a span, restricted to free positions.

    Row ``q`` is ``e_q + sum_f rows[q][f] e_f``; a vector ``v`` therefore
    has quotient coordinates ``v_f - sum_q v_q rows[q][f]`` on ``free``.
    """

    length: int
    pivots: tuple[int, ...]
    free: tuple[int, ...]
    rows: dict = field(compare=False)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: Mapping[int, object]) -> dict[int, object]:
        """Quotient coordinates of a sparse vector, keyed by free position."""
        out: dict[int, object] = {}
        for k, v in vec.items():
            row = self.rows.get(k)
            if row is None:
                out[k] = out.get(k, 0) + v
            else:
                for f, c in row.items():
                    out[f] = out.get(f, 0) - v * c
        return {k: _as_rational(v) for k, v in out.items() if v}


def certified_reduced_form(vectors: Sequence[Mapping[int, object]], length: int,
                           strategy: RankStrategy = DEFAULT_STRATEGY) -> ReducedForm:
    """Exact reduced form of span(vectors), certified whatever the strategy.

    The modular reduced form is lifted to Q and checked exactly; if that
    fails for every prime tried, exact elimination takes over.
    """
    certified = None
    if vectors and length:
        certified = _modular_rank_certified(vectors, length, strategy)
    if certified is not None:
        _, lifted, piv, free = certified
        # lifted[w] = e_free[w] - sum_q rows[q][free[w]] e_q
        rows: dict[int, dict[int, object]] = {q: {} for q in piv}
        for f, x in zip(free, lifted):
            for q, v in x.items():
                if q != f:
                    rows[q][f] = -v
        return ReducedForm(length, tuple(piv), tuple(free), rows)
    rref = _rref_exact(vectors, length) if vectors else []
    rows = {}
    for r in rref:
        q = min(r)
        rows[q] = {k: v for k, v in r.items() if k != q}
    pivots = tuple(sorted(rows))
    pset = set(pivots)
    return ReducedForm(length, pivots, tuple(i for i in range(length) if i not in pset), rows)
