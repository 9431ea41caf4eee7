import itertools
import random

import pytest
from hypothesis import given, strategies as st

from oschen import corpus, exactla
from oschen.combinatorics import induced, matroid_from_line_combinatorics
from oschen.resonance import (
    Partition,
    almost_only_partitions,
    aomoto_h1,
    bp_hilbert,
    conjecture_rhs,
    enumerate_components,
    is_almost_neighborly,
    is_neighborly,
    is_resonant,
    local_components,
    lower_bound_check,
    neighborly_partitions,
    off_component_point,
    sample_point,
    SearchLimits,
)
from oschen.exactla import InvariantError
from oracles import free_chen, partitions_of
from strategies import line_combinatorics


@pytest.mark.parametrize("name, h, essential", [
    ("braid", {1: 5}, 1),
    ("complete-graph-4", {1: 5}, 1),
    ("complete-graph-5", {1: 15}, 5),
    ("deleted-maclane", {1: 7}, 0),
    ("maclane", {1: 8}, 0),
    ("ceva3", {1: 16}, 4),
    ("pencil-4", {2: 1}, 0),
    ("near-pencil-5", {2: 1}, 0),
    ("generic-5", {}, 0),
])
def test_component_counts(name, h, essential):
    arr = corpus.example(name)
    res = enumerate_components(arr.lc, arr.matroid)
    assert res.complete
    assert res.h == h
    assert sum(c.kind == "essential" for c in res.components) == essential


def test_braid_essential_component(braid):
    res = enumerate_components(braid.lc, braid.matroid)
    (ess,) = [c for c in res.components if c.kind == "essential"]
    expected = [(1, -1, 0, -1, 0, 1), (1, 0, -1, 0, -1, 1)]
    assert exactla.subspace_intersection_dim(ess.basis, expected) == 2
    assert ess.dim == 2


@pytest.mark.parametrize("name", ["braid", "ceva3", "deleted-maclane", "complete-graph-5"])
def test_points_on_and_off_components(name):
    arr = corpus.example(name)
    res = enumerate_components(arr.lc, arr.matroid)
    rng = random.Random(2024)
    for comp in res.components:
        for _ in range(3):
            assert is_resonant(arr.matroid, sample_point(comp, rng))
        # a generic point of a pencil component of dimension r has h1 = r
        if comp.kind == "local":
            assert aomoto_h1(arr.matroid, sample_point(comp, rng)) == comp.dim
    for _ in range(10):
        assert not is_resonant(arr.matroid, off_component_point(res.components, arr.n, rng))


def test_components_are_disjoint(ceva):
    res = enumerate_components(ceva.lc, ceva.matroid)
    for a, b in itertools.combinations(res.components, 2):
        assert exactla.subspace_intersection_dim(a.basis, b.basis) == 0


def test_local_components(braid):
    comps = local_components(braid.lc)
    assert [c.provenance[1] for c in comps] == [(0, 1, 2), (0, 3, 4), (1, 4, 5), (2, 3, 5)]
    assert all(c.projective_dimension == 1 for c in comps)


def test_ceva_neighborly_partitions(ceva):
    parts, cut = neighborly_partitions(induced(ceva.lc, range(9)), 3, 3)
    assert cut  # finer partitions exist beyond the cap
    assert sorted(map(str, parts)) == ["(012|345|678)", "(036|147|258)", "(048|156|237)", "(057|138|246)"]


@given(line_combinatorics(max_n=6))
def test_partition_search_matches_brute_force(lc):
    sub = induced(lc, range(lc.n))
    for almost, check in ((False, is_neighborly), (True, is_almost_neighborly)):
        found, cut = neighborly_partitions(sub, 3, almost=almost)
        assert not cut
        brute = {Partition.of(p) for p in partitions_of(range(lc.n))
                 if len(p) >= 3 and check(sub, Partition.of(p))}
        assert set(found) == brute


def test_almost_neighborly_partitions_of_deleted_maclane(delmac):
    parts = [p for p in almost_only_partitions(delmac.lc) if min(map(len, p.blocks)) > 1]
    assert Partition.parse("(06|13|27|45)") in parts
    for p in parts:
        assert is_almost_neighborly(delmac.lc, p) and not is_neighborly(delmac.lc, p)


def test_partition_notation():
    p = Partition.parse("(13|06|45|27)")
    assert str(p) == "(06|13|27|45)"
    with pytest.raises(ValueError):
        Partition.of([[0, 1], [1, 2]])


def test_search_cap_marks_incomplete(ceva):
    res = enumerate_components(ceva.lc, ceva.matroid, SearchLimits(max_size=6))
    assert not res.complete
    assert res.h == {1: 12}


def test_zero_vector_is_rejected(braid):
    with pytest.raises(ValueError):
        is_resonant(braid.matroid, [0] * 6)


@given(st.integers(1, 5), st.integers(2, 9))
def test_bp_hilbert(r, k):
    # B(p) for a pencil of r+2 planes is the Alexander module of F_{r+1}
    assert bp_hilbert(r, k) == free_chen(r + 1, k)


def test_conjecture_rhs_and_lower_bound(braid):
    assert conjecture_rhs({1: 5}, 4) == 15
    rows = lower_bound_check({2: 4, 3: 10, 4: 15}, {1: 5}, range(2, 5), 3)
    assert [r.difference for r in rows] == [-1, 0, 0]
    with pytest.raises(InvariantError):
        lower_bound_check({2: 4, 3: 9}, {1: 5}, range(2, 4), 3)
