"""Built-in arrangements.

Names are ``braid``, ``ceva3``, ``maclane``, ``deleted-maclane`` and the
parametric families ``pencil-M``, ``near-pencil-M``, ``generic-N`` and
``complete-graph-V`` (``pencil(5)`` style is accepted too).
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass, field

from .combinatorics import (
    CombinatoricsError,
    Graph,
    LineCombinatorics,
    Matroid,
    from_normals,
    graphic,
    matroid_from_line_combinatorics,
)


@dataclass(frozen=True)
class Arrangement:
    """An arrangement ready for analysis."""

    name: str
    lc: LineCombinatorics
    matroid: Matroid
    graph: Graph | None = None
    kappa: dict | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return self.lc.n


def from_line_combinatorics(name: str, lc: LineCombinatorics) -> Arrangement:
    return Arrangement(name, lc, matroid_from_line_combinatorics(lc))


def from_graph(name: str, g: Graph) -> Arrangement:
    lc, m, kappa = graphic(g)
    return Arrangement(name, lc, m, g, kappa)


# normals listed in label order 0..5; they give the flats 012, 034, 145, 235
BRAID_NORMALS = ((1, 0, 0), (0, 1, 0), (1, -1, 0), (1, 0, -1), (0, 0, 1), (0, 1, -1))

# triple points of the deleted MacLane matroid as drawn in the usual picture
DELETED_MACLANE_TRIPLES = ((0, 1, 7), (0, 2, 4), (0, 3, 5), (1, 2, 5), (1, 4, 6), (3, 4, 7), (5, 6, 7))


def braid() -> Arrangement:
    lc = from_normals(BRAID_NORMALS)
    return from_line_combinatorics("braid", lc)


def pencil(m: int) -> Arrangement:
    if m < 3:
        raise CombinatoricsError("a pencil needs at least 3 hyperplanes")
    return from_line_combinatorics(f"pencil-{m}", LineCombinatorics.build(m, [range(m)]))


def near_pencil(m: int) -> Arrangement:
    if m < 4:
        raise CombinatoricsError("a near-pencil needs at least 4 hyperplanes")
    return from_line_combinatorics(f"near-pencil-{m}", LineCombinatorics.build(m, [range(m - 1)]))


def generic(n: int) -> Arrangement:
    if n < 3:
        raise CombinatoricsError("a generic rank-3 arrangement needs at least 3 hyperplanes")
    return from_line_combinatorics(f"generic-{n}", LineCombinatorics.build(n))


def complete_graph(v: int) -> Arrangement:
    if v < 2:
        raise CombinatoricsError("a complete graph needs at least 2 vertices")
    return from_graph(f"complete-graph-{v}", Graph.complete(v))


def affine_plane_lines() -> list[tuple[int, ...]]:
    """The 12 lines of AG(2,3); point ``(r, c)`` has label ``3r + c``."""
    lines = set()
    for a, b in ((0, 1), (1, 0), (1, 1), (1, 2)):
        for c in range(3):
            lines.add(tuple(3 * r + s for r in range(3) for s in range(3) if (a * r + b * s) % 3 == c))
    return sorted(lines)


def ceva3() -> Arrangement:
    return from_line_combinatorics("ceva3", LineCombinatorics.build(9, affine_plane_lines()))


def _maclane_lines() -> list[tuple[int, ...]]:
    # delete the point 8 from AG(2,3); lines through it become doubles
    return [line for line in affine_plane_lines() if 8 not in line]


def maclane() -> Arrangement:
    return from_line_combinatorics("maclane", LineCombinatorics.build(8, _maclane_lines()))


@functools.lru_cache(maxsize=None)
def _deleted_maclane_relabeling() -> tuple[int, ...]:
    lines = _maclane_lines()[1:]  # dissolve one triple line
    target = set(DELETED_MACLANE_TRIPLES)
    for perm in itertools.permutations(range(8)):
        if {tuple(sorted(perm[i] for i in line)) for line in lines} == target:
            return perm
    raise CombinatoricsError("constructed deleted MacLane matroid does not match the drawn one")


def deleted_maclane() -> Arrangement:
    """ML8 minus one line, relabeled to match the standard drawing."""
    lc = LineCombinatorics.build(8, _maclane_lines()[1:]).relabel(_deleted_maclane_relabeling())
    return from_line_combinatorics("deleted-maclane", lc)


_FIXED = {
    "braid": braid,
    "ceva3": ceva3,
    "maclane": maclane,
    "deleted-maclane": deleted_maclane,
}

_FAMILIES = {
    "pencil": pencil,
    "near-pencil": near_pencil,
    "generic": generic,
    "complete-graph": complete_graph,
}

DEFAULT_NAMES = (
    "braid", "pencil-3", "pencil-4", "pencil-5", "near-pencil-4", "near-pencil-5",
    "generic-3", "generic-5", "complete-graph-4", "complete-graph-5",
    "ceva3", "maclane", "deleted-maclane",
)


def list_examples() -> dict[str, str]:
    """Registry of built-in names with a one-line description each."""
    return {
        "braid": "braid arrangement A3 on 6 hyperplanes (graphic arrangement of K4)",
        "pencil-M": "M planes through a common line",
        "near-pencil-M": "M-1 planes through a common line plus one generic plane",
        "generic-N": "N planes in general position in 3-space",
        "complete-graph-V": "graphic arrangement of the complete graph on V vertices",
        "ceva3": "Ceva(3) arrangement, the affine plane over Z/3",
        "maclane": "MacLane matroid ML8",
        "deleted-maclane": "ML8 with one line dissolved",
    }


def example(name: str) -> Arrangement:
    """Look up a built-in arrangement by name."""
    key = name.strip().lower()
    if key in _FIXED:
        return _FIXED[key]()
    m = re.fullmatch(r"([a-z-]+?)[-(]?(\d+)\)?", key)
    if m and m.group(1).rstrip("-") in _FAMILIES:
        return _FAMILIES[m.group(1).rstrip("-")](int(m.group(2)))
    raise KeyError(f"unknown example {name!r}")


def corpus() -> list[Arrangement]:
    return [example(name) for name in DEFAULT_NAMES]
