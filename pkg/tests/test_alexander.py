import random

import pytest
from hypothesis import given, settings, strategies as st

from oschen import corpus
from oschen.alexander import (
    AlexanderModule,
    build_delta_lin,
    chen_ranks,
    free_group_chen,
    hilbert_b,
    nbc_basis_a2,
)
from oschen.combinatorics import LineCombinatorics
from oschen.exactla import RankStrategy
from oracles import free_chen
from strategies import line_combinatorics

MODULAR = RankStrategy("modular", seed=1)


@pytest.mark.parametrize("name, theta", [
    ("braid", [6, 4, 10, 15, 20, 25]),
    ("deleted-maclane", [8, 7, 15, 21, 28, 35]),
    ("ceva3", [9, 12, 40, 56, 64, 80]),
    ("pencil-3", [3, 1, 2, 3, 4, 5]),
    ("generic-4", [4, 0, 0, 0, 0, 0]),
])
def test_chen_ranks(name, theta):
    lc = corpus.example(name).lc
    seq = chen_ranks(lc, kmax=len(theta))
    assert [seq[k] for k in range(1, len(theta) + 1)] == theta


@pytest.mark.parametrize("r", [2, 3, 4])
def test_pencil_is_free_group(r):
    # the pencil of r+1 planes has the Chen ranks of the free group of rank r
    seq = chen_ranks(corpus.pencil(r + 1).lc, kmax=6)
    assert [seq[k] for k in range(2, 7)] == [free_group_chen(r, k) for k in range(2, 7)]


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_free_group_formula(n):
    assert free_group_chen(n, 1) == n
    for k in range(2, 9):
        assert free_group_chen(n, k) == free_chen(n, k)


@pytest.mark.parametrize("name", ["braid", "deleted-maclane", "near-pencil-5", "complete-graph-4"])
def test_three_routes_agree(name):
    p = build_delta_lin(corpus.example(name).lc)
    for k in range(2, 6):
        full = hilbert_b(p, k, MODULAR, method="full")
        assert hilbert_b(p, k, MODULAR, method="reduced") == full
        assert hilbert_b(p, k, MODULAR, method="incremental") == full


@settings(max_examples=15)
@given(line_combinatorics(max_n=6))
def test_incremental_route_on_random_combinatorics(lc):
    p = build_delta_lin(lc)
    inc = AlexanderModule(p, MODULAR)
    red = AlexanderModule(p, MODULAR, method="reduced")
    for k in range(2, 6):
        assert inc.dim(k) == red.dim(k)


@given(line_combinatorics(max_n=6))
def test_second_chen_rank_counts_flats(lc):
    # θ_2 = sum over flats of size >= 3 of C(|X|-1, 2)
    expected = sum((len(f) - 1) * (len(f) - 2) // 2 for f in lc.flats)
    assert chen_ranks(lc, kmax=2, strategy=MODULAR)[2] == expected


def test_chen_ranks_do_not_depend_on_labels(braid):
    rng = random.Random(7)
    base = [chen_ranks(braid.lc, kmax=6)[k] for k in range(1, 7)]
    for _ in range(5):
        perm = list(range(6))
        rng.shuffle(perm)
        lc = braid.lc.relabel(perm)
        assert [chen_ranks(lc, kmax=6)[k] for k in range(1, 7)] == base


def test_presentation_shape(braid):
    p = build_delta_lin(braid.lc)
    assert len(nbc_basis_a2(braid.lc)) == 11
    assert p.generator_degree == 2
    with pytest.raises(ValueError):
        hilbert_b(p, 1)


def test_multiplication_is_compatible(braid):
    mod = AlexanderModule(build_delta_lin(braid.lc))
    mult3, mult4 = mod.multiplication(3), mod.multiplication(4)
    nv = len(mult3)
    assert len(mult3[0]) == mod.dim(3)
    for i in range(nv):
        for j in range(nv):
            for b in range(mod.dim(3)):
                ij, ji = {}, {}
                for t, v in mult3[j][b].items():
                    for s, w in mult4[i][t].items():
                        ij[s] = ij.get(s, 0) + v * w
                for t, v in mult3[i][b].items():
                    for s, w in mult4[j][t].items():
                        ji[s] = ji.get(s, 0) + v * w
                assert {s: v for s, v in ij.items() if v} == {s: v for s, v in ji.items() if v}


def test_invalid_arguments():
    lc = LineCombinatorics.build(3, [(0, 1, 2)])
    with pytest.raises(ValueError):
        chen_ranks(lc, kmax=1)
    with pytest.raises(ValueError):
        AlexanderModule(build_delta_lin(lc), method="magic")
    with pytest.raises(ValueError):
        free_group_chen(0, 2)
