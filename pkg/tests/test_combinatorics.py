import itertools

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from oschen import corpus
from oschen.combinatorics import (
    CombinatoricsError,
    Graph,
    LineCombinatorics,
    Matroid,
    from_normals,
    graphic,
    induced,
    matroid_from_line_combinatorics,
    matroid_from_normals,
    mobius,
    subarrangements,
)
from strategies import line_combinatorics, permutations

BRAID_FLATS = [(0, 1, 2), (0, 3, 4), (1, 4, 5), (2, 3, 5)]


def test_braid_from_normals():
    lc = from_normals(corpus.BRAID_NORMALS)
    assert lc.n == 6
    assert list(lc.flats) == BRAID_FLATS
    assert list(lc.doubles) == [(0, 5), (1, 3), (2, 4)]
    assert mobius(lc, (0, 1, 2)) == 2


@pytest.mark.parametrize("flats, message", [
    ([(0, 1, 2), (0, 1, 3)], "share"),
    ([(0, 1, 9)], "outside"),
    ([(0, 0, 1)], "repeat"),
])
def test_validation_errors(flats, message):
    with pytest.raises(CombinatoricsError, match=message):
        LineCombinatorics.build(4, flats)


def test_normals_validation():
    with pytest.raises(CombinatoricsError, match="proportional"):
        from_normals([(1, 0, 0), (2, 0, 0), (0, 1, 0)])
    with pytest.raises(CombinatoricsError, match="zero"):
        from_normals([(0, 0, 0)])
    with pytest.raises(CombinatoricsError, match="3-space"):
        from_normals([(1, 0)])


@pytest.mark.parametrize("name", corpus.DEFAULT_NAMES)
def test_corpus_matroids_satisfy_axioms(name):
    arr = corpus.example(name)
    arr.matroid.check_axioms()
    if arr.matroid.rank == 3:
        assert arr.matroid.rank2_flats().flats == arr.lc.flats


def test_matroid_from_normals_agrees_with_flats():
    normals = corpus.BRAID_NORMALS
    m1 = matroid_from_normals(normals)
    m2 = matroid_from_line_combinatorics(from_normals(normals))
    assert m1.rank == m2.rank == 3
    assert sorted(m1.circuits) == sorted(m2.circuits)


@given(line_combinatorics())
def test_line_combinatorics_round_trip(lc):
    m = matroid_from_line_combinatorics(lc)
    m.check_axioms()
    if m.rank == 3:
        assert m.rank2_flats().flats == lc.flats
    # every pair lies in exactly one rank-2 flat
    for i, j in itertools.combinations(range(lc.n), 2):
        assert sum(1 for f in lc.all_flats if i in f and j in f) == 1


@given(line_combinatorics().flatmap(lambda lc: st.tuples(st.just(lc), permutations(lc.n))))
def test_relabel_preserves_flat_sizes(pair):
    lc, perm = pair
    other = lc.relabel(perm)
    assert sorted(map(len, other.all_flats)) == sorted(map(len, lc.all_flats))
    inverse = [0] * lc.n
    for i, p in enumerate(perm):
        inverse[p] = i
    assert other.relabel(inverse) == lc


def test_pencil_predicates():
    assert corpus.pencil(4).lc.is_pencil()
    assert not corpus.pencil(4).lc.is_near_pencil()
    assert corpus.near_pencil(5).lc.is_near_pencil()
    assert not corpus.braid().lc.is_pencil()


def test_graph_validation():
    with pytest.raises(CombinatoricsError):
        Graph.build(3, [(0, 0)])
    with pytest.raises(CombinatoricsError):
        Graph.build(3, [(0, 1), (1, 0)])
    with pytest.raises(CombinatoricsError):
        Graph.build(2, [(0, 2)])


@pytest.mark.parametrize("v", [3, 4, 5])
def test_complete_graph_clique_counts(v):
    lc, m, kappa = graphic(Graph.complete(v))
    from math import comb
    assert kappa == {s: comb(v, s + 1) for s in range(1, v)}
    assert m.rank == v - 1
    assert len(lc.flats) == comb(v, 3)


def test_graphic_matches_networkx_cycles():
    g = Graph.build(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2), (0, 4)])
    lc, m, kappa = graphic(g)
    expected = sum(1 for _ in nx.simple_cycles(g.to_networkx()))
    assert len(m.circuits) == expected
    assert kappa[2] == 3  # triangles 012, 234, 024
    m.check_axioms()


def test_triangle_graph():
    lc, m, _ = graphic(Graph.build(4, [(0, 1), (1, 2), (2, 0)]))
    assert lc.n == 3 and lc.flats == ((0, 1, 2),)


def test_induced_and_subarrangements(braid):
    sub = induced(braid.lc, (0, 1, 2, 5))
    assert (0, 1, 2) in sub.flats and (0, 5) in sub.flats and (1, 5) in sub.flats
    subs = list(subarrangements(braid.lc, 3, 4))
    assert len(subs) == 20 + 15
    with pytest.raises(CombinatoricsError):
        list(subarrangements(braid.lc, 2))


def test_deleted_maclane_labels(delmac):
    assert delmac.lc.flats == corpus.DELETED_MACLANE_TRIPLES
    assert len(delmac.matroid.circuits) == 42


def test_ceva_labels(ceva):
    assert len(ceva.lc.flats) == 12 and all(len(f) == 3 for f in ceva.lc.flats)
    assert len(ceva.matroid.circuits) == 66


def test_matroid_rank_function():
    m = Matroid.build(4, 3, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    assert m.rank_of([0, 1, 2, 3]) == 2
    assert m.is_independent([0, 1])
    assert not m.is_independent([0, 1, 2])
