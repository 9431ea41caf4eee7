import pytest

from oschen import corpus
from oschen.alexander import AlexanderModule, build_delta_lin
from oschen.torsion import (
    TorsionComputer,
    bprime_hilbert,
    h0_torsion,
    sheaf_sequence_report,
    torsion_report,
)


def module(name):
    return AlexanderModule(build_delta_lin(corpus.example(name).lc))


@pytest.mark.parametrize("name, h, ks, b, bp, h0, h1", [
    ("braid", {1: 5}, [2], [4], [5], [0], [1]),
    ("deleted-maclane", {1: 7}, [2, 3, 4], [7, 15, 21], [7, 14, 21], [0, 1, 0], [0, 0, 0]),
    ("ceva3", {1: 16}, [2, 3, 4, 5], [12, 40, 56, 64], [16, 32, 48, 64], [0, 8, 8, 0], [4, 0, 0, 0]),
])
def test_sheaf_sequence_values(name, h, ks, b, bp, h0, h1):
    rep = torsion_report(module(name), h, ks, window=4)
    assert [rep.row(k).b for k in ks] == b
    assert [rep.row(k).bprime for k in ks] == bp
    assert [rep.row(k).h0 for k in ks] == h0
    assert [rep.row(k).h1 for k in ks] == h1
    assert not rep.failures
    assert all(r.stabilized and r.conjectural for r in rep.rows)


def test_maclane_torsion():
    assert h0_torsion(module("maclane"), 3).value == 5


def test_complete_graph_h1():
    rep = torsion_report(module("complete-graph-5"), {1: 15}, [2])
    assert rep.row(2).h1 == 5


@pytest.mark.parametrize("name", ["ceva3", "deleted-maclane"])
def test_torsion_history_is_nondecreasing(name):
    comp = TorsionComputer(module(name))
    for k in (2, 3, 4):
        val = comp.h0(k, window=4)
        assert list(val.history) == sorted(val.history)
        assert val.history[0] == len(comp.space(k, 1))


def test_torsion_spaces_are_annihilated(ceva):
    mod = module("ceva3")
    comp = TorsionComputer(mod)
    for x in comp.space(3, 1):
        for cols in mod.multiplication(3):
            image = {}
            for b, c in x.items():
                for t, v in cols[b].items():
                    image[t] = image.get(t, 0) + c * v
            assert not any(image.values())


def test_max_degree_caps_the_window():
    comp = TorsionComputer(module("braid"), max_degree=4)
    val = comp.h0(3, window=4)
    assert val.window == 1 and not val.stabilized
    with pytest.raises(ValueError):
        comp.h0(4)


def test_argument_validation():
    comp = TorsionComputer(module("braid"))
    with pytest.raises(ValueError):
        comp.h0(1)
    with pytest.raises(ValueError):
        comp.h0(2, window=0)


def test_negative_inference_is_reported_not_clamped():
    rep = sheaf_sequence_report({3: 10}, {3: 5}, {3: 1})
    assert rep.row(3).h1 == -4
    assert rep.failures == (3,)
    with pytest.raises(ValueError):
        sheaf_sequence_report({3: -1}, {3: 5}, {3: 1})


def test_bprime_hilbert():
    assert [bprime_hilbert({1: 16}, k) for k in range(2, 6)] == [16, 32, 48, 64]
    assert bprime_hilbert({1: 2, 2: 1}, 3) == 2 * (2 * 1) + 1 * (2 * 4)
