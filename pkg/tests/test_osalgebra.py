import itertools
import math

import pytest
from hypothesis import given, strategies as st

from oschen import corpus, exactla
from oschen.combinatorics import matroid_from_line_combinatorics
from oschen.osalgebra import (
    ExteriorElement,
    a_dims,
    boundary,
    complement,
    decone_action,
    decone_complement,
    generator_action,
    in_ideal,
    isotropic,
    multiplication_map,
    nbc_dims,
)
from strategies import line_combinatorics

N = 6


def elements(degree):
    subsets = [frozenset(c) for c in itertools.combinations(range(N), degree)]
    return st.dictionaries(st.sampled_from(subsets), st.integers(-3, 3), max_size=4).map(
        lambda d: ExteriorElement.from_dict({sum(1 << i for i in s): c for s, c in d.items()}))


@given(elements(1), elements(1), elements(2))
def test_wedge_is_associative(a, b, c):
    assert a.wedge(b).wedge(c) == a.wedge(b.wedge(c))


@given(elements(1), elements(2))
def test_graded_commutativity(a, b):
    assert a.wedge(b) == b.wedge(a)
    assert a.wedge(a) == ExteriorElement.from_dict({})


@given(st.sets(st.integers(0, 7), min_size=2, max_size=5))
def test_boundary_squares_to_zero(s):
    total = {}
    for mask, c in boundary(s).terms:
        if mask:
            for m2, c2 in boundary([i for i in range(8) if mask >> i & 1]).terms:
                total[m2] = total.get(m2, 0) + c * c2
    assert not any(total.values())


def test_boundary_of_dependent_triple_lies_in_ideal(braid):
    for flat in braid.lc.flats:
        assert in_ideal(braid.matroid, boundary(flat))
    assert not in_ideal(braid.matroid, boundary((0, 1, 3)))


def test_homogeneity_is_enforced():
    with pytest.raises(ValueError):
        ExteriorElement.from_dict({0b1: 1, 0b11: 1})


@pytest.mark.parametrize("name", corpus.DEFAULT_NAMES)
def test_dimensions_match_nbc_count(name):
    m = corpus.example(name).matroid
    assert a_dims(m) == nbc_dims(m)


@given(line_combinatorics())
def test_dimensions_match_nbc_count_random(lc):
    m = matroid_from_line_combinatorics(lc)
    dims = a_dims(m)
    assert dims == nbc_dims(m)
    if m.rank == 3:
        # Poincaré polynomial of a rank-3 arrangement
        b2 = math.comb(lc.n, 2) - sum(math.comb(len(f), 2) - (len(f) - 1) for f in lc.flats)
        assert dims == [1, lc.n, b2, dims[0] - lc.n + b2]


@pytest.mark.parametrize("name", ["braid", "ceva3", "deleted-maclane", "pencil-4"])
def test_decone_divides_by_one_plus_t(name):
    m = corpus.example(name).matroid
    full = a_dims(m)
    dec = [decone_complement(m, d).dim for d in range(m.rank + 1)]
    # π(A, t) = (1 + t) π(A/(e_0), t)
    for d in range(m.rank + 1):
        assert full[d] == dec[d] + (dec[d - 1] if d else 0)
    assert dec[-1] == 0


def test_ceva_decone_dims(ceva):
    assert [decone_complement(ceva.matroid, d).dim for d in range(4)] == [1, 8, 16, 0]


@pytest.mark.parametrize("action, comp", [(generator_action, complement),
                                          (decone_action, decone_complement)])
def test_generator_actions_anticommute(braid, action, comp):
    m = braid.matroid
    act1, act2 = action(m, 1), action(m, 2)
    nvars = len(act1)
    for i, j in itertools.combinations_with_replacement(range(nvars), 2):
        for b in range(comp(m, 1).dim):
            left = {}
            for t, v in act1[j][b].items():
                for s, w in act2[i][t].items():
                    left[s] = left.get(s, 0) + v * w
            right = {}
            for t, v in act1[i][b].items():
                for s, w in act2[j][t].items():
                    right[s] = right.get(s, 0) + v * w
            assert all(left.get(s, 0) + right.get(s, 0) == 0 for s in set(left) | set(right))


def test_multiplication_map_and_isotropy(braid):
    m = braid.matroid
    v1 = (1, -1, 0, -1, 0, 1)
    v2 = (1, 0, -1, 0, -1, 1)
    assert isotropic(m, [v1, v2])
    assert not isotropic(m, [(1, 0, 0, 0, 0, 0), (0, 0, 0, 0, 0, 1)])
    # a resonant vector has a larger kernel than a generic one
    assert multiplication_map(m, v1).cols - exactla.rank(multiplication_map(m, v1)) > 1
    assert multiplication_map(m, (1, 2, 3, 5, 7, 11)).cols - exactla.rank(
        multiplication_map(m, (1, 2, 3, 5, 7, 11))) == 1
