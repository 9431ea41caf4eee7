from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oschen import corpus
from oschen.alexander import chen_ranks
from oschen.polyfit import differences, fit_polynomial


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=4),
       st.integers(2, 5), st.lists(st.integers(-50, 50), max_size=3))
def test_recovers_a_polynomial_after_a_prefix(coeffs, kmin, junk):
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    deg = len(coeffs) - 1
    poly = lambda k: sum(c * k ** i for i, c in enumerate(coeffs))
    start = kmin + len(junk)
    values = {kmin + i: v for i, v in enumerate(junk)}
    values.update({k: poly(k) for k in range(start, start + deg + 3)})
    fit = fit_polynomial(values, kmin)
    assert fit is not None
    assert fit.degree == deg
    assert fit.k0 <= start
    assert all(fit(k) == poly(k) for k in range(start, start + 10))
    assert fit.coefficients == tuple(Fraction(c) for c in coeffs)


def test_needs_two_extra_values():
    # a line through two points is not yet evidence
    assert fit_polynomial({2: 1, 3: 4}) is None
    assert fit_polynomial({2: 1, 3: 4, 4: 7}).degree == 1


def test_rejects_gaps():
    with pytest.raises(ValueError):
        fit_polynomial({2: 1, 4: 2})


def test_zero_polynomial():
    fit = fit_polynomial({2: 5, 3: 0, 4: 0})
    assert fit.degree == -1 and fit.k0 == 3 and fit.describe() == "0"


def test_differences():
    assert differences([1, 4, 9, 16], 2) == [2, 2]


@pytest.mark.parametrize("name, kmax, degree, k0, text", [
    ("braid", 8, 1, 3, "5*k - 5"),
    ("deleted-maclane", 8, 1, 4, "7*k - 7"),
    ("ceva3", 8, 1, 5, "16*k - 16"),
])
def test_examples(name, kmax, degree, k0, text):
    seq = chen_ranks(corpus.example(name).lc, kmax=kmax)
    fit = fit_polynomial(seq.theta)
    assert (fit.degree, fit.k0, fit.describe()) == (degree, k0, text)


def test_free_group_degree():
    seq = chen_ranks(corpus.pencil(4).lc, kmax=8)
    fit = fit_polynomial(seq.theta)
    assert fit.degree == 2
    assert fit.coefficients == (Fraction(-1), Fraction(0), Fraction(1))  # k^2 - 1
