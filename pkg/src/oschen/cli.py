"""Command-line front end: parse an arrangement, run the analysis, report.

Exit codes: 0 success, 2 input error, 3 invariant violation, 4 resource
limit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import alexander, corpus, linstrand, polyfit, resonance, torsion
from .combinatorics import (
    CombinatoricsError,
    Graph,
    LineCombinatorics,
    from_normals,
    matroid_from_normals,
)
from .corpus import Arrangement
from .exactla import InvariantError, RankStrategy, ResourceLimitError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INVARIANT = 3
EXIT_RESOURCE = 4

KINDS = ("normals", "line-combinatorics", "graph")


class InputError(ValueError):
    """A malformed input document; the message starts with a JSON path."""


# --------------------------------------------------------------------------
# input


@dataclass(frozen=True)
class ArrangementInput:
    name: str
    kind: str
    payload: dict = field(compare=False)
    arrangement: Arrangement = field(compare=False)

    def echo(self) -> dict:
        return {"name": self.name, "kind": self.kind, **self.payload}


def _int(value, path: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise InputError(f"{path}: expected an integer, got {json.dumps(value)}")
    return value


def _int_rows(value, path: str, width: int | None = None) -> list[list[int]]:
    if not isinstance(value, list):
        raise InputError(f"{path}: expected an array")
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list):
            raise InputError(f"{path}[{i}]: expected an array")
        if width is not None and len(row) != width:
            raise InputError(f"{path}[{i}]: expected {width} entries, got {len(row)}")
        rows.append([_int(x, f"{path}[{i}][{j}]") for j, x in enumerate(row)])
    return rows


def parse_input(data: bytes | str) -> ArrangementInput:
    """Validate a JSON arrangement description and build the arrangement."""
    try:
        text = data.decode("utf-8") if isinstance(data, bytes) else data
        doc = json.loads(text)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"$: not valid UTF-8 JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise InputError("$: expected an object")
    name = doc.get("name", "input")
    if not isinstance(name, str):
        raise InputError("$.name: expected a string")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise InputError(f"$.kind: expected one of {', '.join(KINDS)}, got {json.dumps(kind)}")
    payload_keys = {"normals": ("normals",), "line-combinatorics": ("n", "flats"), "graph": ("graph",)}
    for other, keys in payload_keys.items():
        if other != kind:
            for key in keys:
                if key in doc and key not in payload_keys[kind]:
                    raise InputError(f"$.{key}: not allowed for kind {kind!r}")
    for key in payload_keys[kind]:
        if key not in doc and not (kind == "line-combinatorics" and key == "flats"):
            raise InputError(f"$.{key}: required for kind {kind!r}")
    try:
        if kind == "normals":
            normals = _int_rows(doc["normals"], "$.normals")
            lc = from_normals(normals)
            arr = Arrangement(name, lc, matroid_from_normals(normals))
            payload = {"normals": normals}
        elif kind == "line-combinatorics":
            n = _int(doc["n"], "$.n")
            flats = _int_rows(doc.get("flats", []), "$.flats")
            lc = LineCombinatorics.build(n, flats)
            arr = corpus.from_line_combinatorics(name, lc)
            payload = {"n": n, "flats": flats}
        else:
            g = doc["graph"]
            if not isinstance(g, dict):
                raise InputError("$.graph: expected an object")
            if "vertices" not in g:
                raise InputError("$.graph.vertices: required")
            vertices = _int(g["vertices"], "$.graph.vertices")
            edges = _int_rows(g.get("edges", []), "$.graph.edges", width=2)
            arr = corpus.from_graph(name, Graph.build(vertices, edges))
            payload = {"graph": {"vertices": vertices, "edges": edges}}
    except CombinatoricsError as exc:
        raise InputError(f"$: {exc}") from None
    return ArrangementInput(name, kind, payload, arr)


def example_input(name: str) -> ArrangementInput:
    try:
        arr = corpus.example(name)
    except (KeyError, CombinatoricsError, ValueError) as exc:
        raise InputError(f"--example: {exc}") from None
    payload: dict[str, Any] = {"n": arr.n, "flats": [list(f) for f in arr.lc.flats]}
    kind = "line-combinatorics"
    if arr.graph is not None:
        kind = "graph"
        payload = {"graph": {"vertices": arr.graph.vertices, "edges": [list(e) for e in arr.graph.edges]}}
    return ArrangementInput(arr.name, kind, payload, arr)


def list_examples() -> dict[str, str]:
    return corpus.list_examples()


# --------------------------------------------------------------------------
# analysis


@dataclass(frozen=True)
class Options:
    kmax: int = 10
    imax: int = 6
    strategy: str = "verify"
    seed: int = 0
    search_cap: int | None = None
    torsion_window: int = 4
    timing: bool = False


def _rational(x) -> int | str:
    """Integers stay numbers; other rationals become ``"p/q"``."""
    q = Fraction(x)
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def analyze(inp: ArrangementInput, opts: Options = Options()) -> dict:
    """Run the whole analysis and return the report as plain JSON data."""
    if opts.kmax < 2:
        raise InputError("--kmax: must be at least 2")
    if opts.imax < 1:
        raise InputError("--imax: must be at least 1")
    if opts.torsion_window < 1:
        raise InputError("--torsion-window: must be at least 1")
    arr = inp.arrangement
    lc, m = arr.lc, arr.matroid
    strategy = RankStrategy(opts.strategy, seed=opts.seed)
    timings: dict[str, float] = {}

    def timed(label, fn, *args, **kwargs):
        start = time.perf_counter()
        out = fn(*args, **kwargs)
        timings[label] = round(time.perf_counter() - start, 3)
        return out

    module = alexander.AlexanderModule(alexander.build_delta_lin(lc), strategy)
    theta = timed("chen_ranks", alexander.chen_ranks, lc, opts.kmax, strategy, module)
    res = timed("resonance", resonance.enumerate_components, lc, m,
                resonance.SearchLimits(max_size=opts.search_cap))
    h = res.h
    fit = polyfit.fit_polynomial({k: theta[k] for k in range(2, opts.kmax + 1)})
    k0 = fit.k0 if fit is not None else None
    rows = resonance.lower_bound_check(theta, h, range(2, opts.kmax + 1), k0)
    table = timed("betti", linstrand.betti_table, m, opts.imax, strategy)
    linstrand.cross_check_chen(theta, table, opts.kmax)
    epy = timed("epy", linstrand.epy_exactness, m, opts.imax, strategy)
    trange = range(2, opts.kmax)
    tors = timed("torsion", torsion.torsion_report, module, h, trange, opts.torsion_window, opts.kmax)
    cx = linstrand.complexity_report(lc, h, fit, check=res.complete)
    almost = [str(p) for p in resonance.almost_only_partitions(lc)
              if min(map(len, p.blocks)) >= 2]

    report = {
        "input": inp.echo(),
        "n": arr.n,
        "theta": [theta[k] for k in range(1, opts.kmax + 1)],
        "resonance": {
            "complete": res.complete,
            "components": [
                {
                    "basis": [[_rational(x) for x in v] for v in c.basis],
                    "kind": c.kind,
                    "projective_dimension": c.projective_dimension,
                    "provenance": _provenance(c.provenance),
                }
                for c in res.components
            ],
            "h": {str(r): cnt for r, cnt in sorted(h.items())},
        },
        "conjecture": [
            {"k": r.k, "theta": r.theta, "rhs": r.rhs, "difference": r.difference,
             "equal": r.difference == 0}
            for r in rows
        ],
        "hilbert_polynomial": None if fit is None else {
            "degree": fit.degree,
            "stabilization": fit.k0,
            "coefficients": [_rational(c) for c in fit.coefficients],
            "polynomial": fit.describe(),
        },
        "betti": {
            "imax": table.imax,
            "window": table.window,
            "entries": [{"i": i, "j": j, "beta": v} for (i, j), v in sorted(table.beta.items())],
            "linear_strand": [table[i, i + 1] for i in range(1, table.imax + 1)],
            "certified": table.certified,
            "uncertified": [list(e) for e in table.uncertified],
            "chen_cross_check": True,
        },
        "epy": {"degree_bound": opts.imax, "exact": epy.exact,
                "failures": [list(f) for f in epy.failures]},
        "torsion": {
            "window": opts.torsion_window,
            "rows": [
                {"k": r.k, "b": r.b, "bprime": r.bprime, "h0": r.h0, "h1_inferred": r.h1,
                 "stabilized": r.stabilized, "conjectural": r.conjectural}
                for r in tors.rows
            ],
            "consistency_failures": list(tors.failures),
            "almost_neighborly_partitions": almost,
        },
        "complexity": {"cx": cx.cx, "dim_r1": cx.dim_r1, "fitted_degree": cx.fitted_degree},
        "metadata": {
            "strategy": opts.strategy,
            "seed": opts.seed,
            "kmax": opts.kmax,
            "imax": opts.imax,
            "search_cap": opts.search_cap,
            "threads": thread_cap(),
        },
    }
    if opts.timing:
        report["metadata"]["timing"] = timings
    return report


def _provenance(prov) -> list:
    out = []
    for item in prov:
        out.append(list(item) if isinstance(item, tuple) else item)
    return out


def thread_cap() -> int:
    """Parallelism cap from ``OSCHEN_THREADS`` (default 1)."""
    raw = os.environ.get("OSCHEN_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"OSCHEN_THREADS: expected a positive integer, got {raw!r}") from None
    if value < 1:
        raise InputError(f"OSCHEN_THREADS: expected a positive integer, got {raw!r}")
    return value


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def to_text(report: dict) -> str:
    lines = [f"arrangement {report['input']['name']} ({report['n']} hyperplanes)"]
    lines.append("theta: " + ", ".join(str(t) for t in report["theta"]))
    res = report["resonance"]
    h = ", ".join(f"h_{r}={c}" for r, c in res["h"].items()) or "none"
    lines.append(f"resonance: {len(res['components'])} components ({h})"
                 + ("" if res["complete"] else ", search capped"))
    for c in res["components"]:
        basis = "; ".join("(" + " ".join(str(x) for x in v) + ")" for v in c["basis"])
        lines.append(f"  {c['kind']:<9} {basis}")
    hp = report["hilbert_polynomial"]
    if hp is None:
        lines.append("hilbert polynomial: not determined up to kmax")
    else:
        lines.append(f"hilbert polynomial: {hp['polynomial']} for k >= {hp['stabilization']}")
    lines.append("k  theta  rhs  difference")
    for r in report["conjecture"]:
        lines.append(f"{r['k']:<2} {r['theta']:>6} {r['rhs']:>4} {r['difference']:>11}")
    b = report["betti"]
    lines.append("linear strand: " + ", ".join(str(x) for x in b["linear_strand"])
                 + ("" if b["certified"] else " (some entries only mod p)"))
    lines.append(f"EPY exact through degree {report['epy']['degree_bound']}: {report['epy']['exact']}")
    lines.append("k  B   B'  H0  H1(inferred)")
    for r in report["torsion"]["rows"]:
        mark = "" if r["stabilized"] else "  (not stabilized)"
        lines.append(f"{r['k']:<2} {r['b']:>3} {r['bprime']:>3} {r['h0']:>3} {r['h1_inferred']:>3}{mark}")
    cx = report["complexity"]
    lines.append(f"complexity {cx['cx']}, dim R1 = {cx['dim_r1']}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="oschen", description=__doc__.splitlines()[0])
    src = ap.add_mutually_exclusive_group()
    src.add_argument("--input", metavar="FILE", help="JSON arrangement description ('-' for stdin)")
    src.add_argument("--example", metavar="NAME", help="built-in arrangement, e.g. braid or pencil-5")
    src.add_argument("--list-examples", action="store_true", help="print the built-in registry")
    ap.add_argument("--kmax", type=int, default=10)
    ap.add_argument("--imax", type=int, default=6)
    ap.add_argument("--strategy", choices=("exact", "modular", "verify"), default="verify")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--format", choices=("json", "text"), default="json")
    ap.add_argument("--search-cap", type=int, default=None, metavar="N",
                    help="largest sub-arrangement examined by the resonance search")
    ap.add_argument("--torsion-window", type=int, default=4, metavar="N")
    ap.add_argument("--timing", action="store_true", help="include wall-clock timings in the report")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.list_examples:
            for name, desc in list_examples().items():
                print(f"{name:<16} {desc}")
            return EXIT_OK
        if args.input is not None:
            if args.input == "-":
                data = sys.stdin.buffer.read()
            else:
                try:
                    with open(args.input, "rb") as fh:
                        data = fh.read()
                except OSError as exc:
                    raise InputError(f"--input: {exc}") from None
            inp = parse_input(data)
        elif args.example is not None:
            inp = example_input(args.example)
        else:
            ap.error("one of --input, --example or --list-examples is required")
        thread_cap()
        opts = Options(args.kmax, args.imax, args.strategy, args.seed, args.search_cap,
                       args.torsion_window, args.timing)
        report = analyze(inp, opts)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ResourceLimitError, MemoryError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    sys.stdout.write(to_json(report) if args.format == "json" else to_text(report))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
