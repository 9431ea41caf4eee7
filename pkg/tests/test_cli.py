import io
import json

import pytest

from oschen import cli, corpus
from oschen.alexander import AlexanderModule
from oschen.exactla import ResourceLimitError

SMALL = ["--kmax", "6", "--imax", "3"]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def braid_document():
    return {"name": "braid", "kind": "normals", "normals": [list(v) for v in corpus.BRAID_NORMALS]}


def test_parse_braid_normals():
    inp = cli.parse_input(json.dumps(braid_document()).encode())
    assert inp.kind == "normals"
    assert len(inp.arrangement.lc.flats) == 4
    assert all(len(f) == 3 for f in inp.arrangement.lc.flats)


def test_parse_triangle_graph():
    inp = cli.parse_input('{"kind":"graph", "graph":{"vertices":4,"edges":[[0,1],[1,2],[2,0]]}}')
    assert inp.arrangement.n == 3
    assert inp.arrangement.lc.flats == ((0, 1, 2),)


@pytest.mark.parametrize("doc, path", [
    ('{"kind": "normals", "normals": [[1, 0, 0], [0, "x", 0]]}', "$.normals[1][1]"),
    ('{"kind": "normals", "normals": [[1, 0, 0], 5]}', "$.normals[1]"),
    ('{"kind": "planes"}', "$.kind"),
    ('{"kind": "graph", "graph": {"edges": []}}', "$.graph.vertices"),
    ('{"kind": "graph", "graph": {"vertices": 3, "edges": [[0, 1, 2]]}}', "$.graph.edges[0]"),
    ('{"kind": "line-combinatorics", "flats": []}', "$.n"),
    ('{"kind": "line-combinatorics", "n": 4, "normals": []}', "$.normals"),
    ('{"kind": "line-combinatorics", "n": true}', "$.n"),
    ('[1, 2]', "$"),
    (b'\xff', "$"),
])
def test_schema_errors_carry_a_json_path(doc, path):
    with pytest.raises(cli.InputError) as exc:
        cli.parse_input(doc)
    assert str(exc.value).startswith(path + ":")


def test_overlapping_flats_are_rejected():
    with pytest.raises(cli.InputError, match="share"):
        cli.parse_input('{"kind": "line-combinatorics", "n": 5, "flats": [[0, 1, 2], [0, 1, 3]]}')


def test_list_examples(capsys):
    code, out, _ = run(capsys, "--list-examples")
    assert code == cli.EXIT_OK
    assert "braid" in out and "ceva3" in out


def test_braid_report(capsys):
    code, out, _ = run(capsys, "--example", "braid", "--kmax", "5", "--imax", "4")
    assert code == cli.EXIT_OK
    rep = json.loads(out)
    assert rep["theta"] == [6, 4, 10, 15, 20]
    assert rep["resonance"]["h"] == {"1": 5}
    hp = rep["hilbert_polynomial"]
    assert (hp["degree"], hp["stabilization"], hp["polynomial"]) == (1, 3, "5*k - 5")
    assert [r["difference"] for r in rep["conjecture"] if r["k"] >= 3] == [0, 0, 0]
    assert rep["betti"]["certified"]
    assert "timing" not in rep["metadata"]


def test_input_file_and_stdin(tmp_path, capsys, monkeypatch):
    path = tmp_path / "braid.json"
    path.write_text(json.dumps(braid_document()))
    code, from_file, _ = run(capsys, "--input", str(path), *SMALL)
    assert code == cli.EXIT_OK
    monkeypatch.setattr("sys.stdin", io.TextIOWrapper(io.BytesIO(path.read_bytes())))
    code, from_stdin, _ = run(capsys, "--input", "-", *SMALL)
    assert code == cli.EXIT_OK and from_stdin == from_file


def test_rationals_serialize_as_strings():
    assert cli._rational(3) == 3
    assert cli._rational(cli.Fraction(-1, 2)) == "-1/2"


def test_exit_code_for_bad_input(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"kind": "graph", "graph": {"vertices": 2, "edges": [[0, 5]]}}')
    code, out, err = run(capsys, "--input", str(path))
    assert code == cli.EXIT_INPUT and not out
    assert err.startswith("input error: $")
    assert run(capsys, "--input", str(tmp_path / "missing.json"))[0] == cli.EXIT_INPUT
    assert run(capsys, "--example", "nonesuch")[0] == cli.EXIT_INPUT


def test_exit_code_for_invariant_violation(capsys, monkeypatch):
    real = AlexanderModule.dim
    # a corrupted Chen rank must be caught by the Betti cross-check
    monkeypatch.setattr(AlexanderModule, "dim", lambda self, k: real(self, k) + (k == 3))
    code, out, err = run(capsys, "--example", "braid", *SMALL)
    assert code == cli.EXIT_INVARIANT and not out
    assert "invariant violation" in err


def test_exit_code_for_resource_limit(capsys, monkeypatch):
    def exhausted(*args, **kwargs):
        raise ResourceLimitError("matrix too large")
    monkeypatch.setattr(cli, "analyze", exhausted)
    assert run(capsys, "--example", "braid")[0] == cli.EXIT_RESOURCE


def test_thread_cap(monkeypatch, capsys):
    monkeypatch.setenv("OSCHEN_THREADS", "zero")
    assert run(capsys, "--example", "braid", *SMALL)[0] == cli.EXIT_INPUT
    monkeypatch.setenv("OSCHEN_THREADS", "2")
    assert cli.thread_cap() == 2


def test_reports_are_byte_identical(capsys):
    first = run(capsys, "--example", "deleted-maclane", "--seed", "3", *SMALL)[1]
    second = run(capsys, "--example", "deleted-maclane", "--seed", "3", *SMALL)[1]
    assert first == second


@pytest.mark.parametrize("name", corpus.DEFAULT_NAMES)
def test_exact_and_default_strategy_agree(name):
    inp = cli.example_input(name)
    a = cli.analyze(inp, cli.Options(kmax=8, imax=4, strategy="exact"))
    b = cli.analyze(inp, cli.Options(kmax=8, imax=4))
    assert a["metadata"].pop("strategy") == "exact"
    assert b["metadata"].pop("strategy") == "verify"
    assert cli.to_json(a) == cli.to_json(b)


def test_text_format(capsys):
    code, out, _ = run(capsys, "--example", "ceva3", "--kmax", "7", "--imax", "3", "--format", "text")
    assert code == cli.EXIT_OK
    assert "hilbert polynomial: 16*k - 16 for k >= 5" in out
    assert "resonance: 16 components" in out


def test_timing_flag(capsys):
    rep = json.loads(run(capsys, "--example", "braid", "--timing", *SMALL)[1])
    assert "timing" in rep["metadata"]
