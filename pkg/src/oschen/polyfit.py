"""Eventual polynomial behaviour of an integer sequence by finite differences.

The fitted degree is the smallest ``d`` for which a degree-``d`` polynomial
agrees with a trailing run of at least ``d + 2`` values (so at least one
value beyond the ``d + 1`` that determine it).  The zero polynomial has
degree -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping


@dataclass(frozen=True)
class PolynomialFit:
    """``P(k) = sum_i coefficients[i] k^i`` agreeing with the data for ``k >= k0``."""

    degree: int
    k0: int
    coefficients: tuple[Fraction, ...]
    kmax: int

    def __call__(self, k: int) -> Fraction:
        return sum((c * k ** i for i, c in enumerate(self.coefficients)), Fraction(0))

    def describe(self) -> str:
        if not self.coefficients:
            return "0"
        parts = []
        for i in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[i]
            if not c:
                continue
            mag = abs(c)
            coeff = "" if (mag == 1 and i) else str(mag)
            var = "" if i == 0 else ("k" if i == 1 else f"k^{i}")
            term = f"{coeff}*{var}" if coeff and var else (coeff or var)
            sign = "-" if c < 0 else "+"
            parts.append((sign, term))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, term in parts[1:]:
            text += f" {sign} {term}"
        return text


def differences(values: list[int], order: int) -> list[int]:
    out = list(values)
    for _ in range(order):
        out = [b - a for a, b in zip(out, out[1:])]
    return out


def _interpolate(points: list[tuple[int, int]]) -> tuple[Fraction, ...]:
    """Monomial coefficients of the interpolating polynomial (Lagrange)."""
    deg = len(points) - 1
    coeffs = [Fraction(0)] * (deg + 1)
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xj * basis[t + 1]
            denom *= xi - xj
        for t in range(deg + 1):
            coeffs[t] += yi * basis[t] / denom
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def fit_polynomial(values: Mapping[int, int], kmin: int = 2) -> PolynomialFit | None:
    """Fit the eventual polynomial of ``values[k]`` for consecutive ``k >= kmin``.

    Returns None when no degree fits with a verified extra value.
    """
    ks = sorted(k for k in values if k >= kmin)
    if not ks or ks != list(range(ks[0], ks[-1] + 1)):
        raise ValueError("values must cover consecutive degrees")
    seq = [values[k] for k in ks]
    for d in range(-1, len(seq) - 1):
        diff = differences(seq, d + 1)
        run = 0
        while run < len(diff) and diff[len(diff) - 1 - run] == 0:
            run += 1
        if run == 0:
            continue
        # the zero run covers seq[len(seq) - run - d - 1:]
        start = len(seq) - run - d - 1
        k0 = ks[start]
        if d < 0:
            return PolynomialFit(-1, k0, (), ks[-1])
        pts = [(ks[i], seq[i]) for i in range(start, start + d + 1)]
        return PolynomialFit(d, k0, _interpolate(pts), ks[-1])
    return None
