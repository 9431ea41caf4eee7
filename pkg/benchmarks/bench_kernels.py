"""Compare the compiled echelon kernel with its pure-Python twin.

    python3 benchmarks/bench_kernels.py [--repeat N] [--quick]

Each workload runs with ``compiled=True`` and ``compiled=False`` and the
best of ``--repeat`` wall-clock times is reported along with the speedup.
Both kernels must agree on every rank; a mismatch aborts the run.
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from oschen import _kernel, corpus, exactla
from oschen.alexander import AlexanderModule, build_delta_lin
from oschen.linstrand import cartan_columns

PRIME = 2147483659


def random_sparse(rows: int, cols: int, density: float, seed: int) -> list[dict]:
    rng = random.Random(seed)
    out = []
    for _ in range(rows):
        out.append({j: rng.randint(-9, 9) or 1 for j in range(cols) if rng.random() < density})
    return out


def best_of(repeat: int, fn):
    times, value = [], None
    for _ in range(repeat):
        start = time.perf_counter()
        value = fn()
        times.append(time.perf_counter() - start)
    return min(times), value


def workloads(quick: bool):
    size = 300 if quick else 800
    vecs = random_sparse(size, size, 0.02, 1)
    yield f"random {size}x{size} mod p", lambda c: exactla.modular_echelon(vecs, size, PRIME, c).rank

    # strand differentials stay inside int64 under fraction-free elimination
    name, j = ("braid", 6) if quick else ("ceva3", 5)
    cols, length = cartan_columns(corpus.example(name).matroid, j, 1)
    yield f"{name} strand {j} over Z", lambda c: exactla.exact_rank(cols, length, compiled=c)
    yield f"{name} strand {j} mod p", lambda c: exactla.modular_echelon(cols, length, PRIME, c).rank

    lc = corpus.example("deleted-maclane" if quick else "ceva3").lc
    kmax = 6 if quick else 8

    def chen(c):
        mod = AlexanderModule(build_delta_lin(lc), exactla.RankStrategy("modular", compiled=c))
        return [mod.dim(k) for k in range(2, kmax + 1)]
    yield f"Chen ranks of {'deleted-maclane' if quick else 'ceva3'} to k={kmax}", chen


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args(argv)
    if not _kernel.COMPILED:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    print(f"{'workload':<42} {'compiled':>10} {'pure':>10} {'speedup':>8}")
    for label, fn in workloads(args.quick):
        fast, a = best_of(args.repeat, lambda: fn(True))
        slow, b = best_of(args.repeat, lambda: fn(False))
        if a != b:
            print(f"{label}: kernels disagree ({a} != {b})", file=sys.stderr)
            return 2
        print(f"{label:<42} {fast:>9.3f}s {slow:>9.3f}s {slow / fast:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
