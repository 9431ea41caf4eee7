"""Hypothesis strategies for arrangement combinatorics."""

from hypothesis import strategies as st

from oschen.combinatorics import LineCombinatorics
from oracles import random_flats


@st.composite
def line_combinatorics(draw, min_n=3, max_n=7):
    n = draw(st.integers(min_n, max_n))
    subsets = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=3, max_size=4), max_size=6))
    return LineCombinatorics.build(n, random_flats(subsets, n))


@st.composite
def permutations(draw, n):
    return draw(st.permutations(list(range(n))))
