"""Small independent oracles used by several test modules."""

from fractions import Fraction
import itertools
import math


def dense_rank(rows):
    """Rank over Q by textbook Gaussian elimination on dense Fraction rows."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    rank, ncols = 0, len(m[0])
    for c in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def dense_rank_mod(rows, p):
    m = [[x % p for x in r] for r in rows]
    if not m:
        return 0
    rank, ncols = 0, len(m[0])
    for c in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = pow(m[rank][c], -1, p)
        m[rank] = [a * inv % p for a in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [(a - f * b) % p for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def free_chen(n, k):
    """Chen ranks of F_n for k >= 2, as the kernel of S_{k-1} ⊗ V -> S_k."""
    return n * math.comb(n + k - 2, k - 1) - math.comb(n + k - 1, k)


def partitions_of(items):
    """All set partitions, by brute-force recursion."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in partitions_of(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def line_combinatorics_strategy_flats(n, picks):
    """Greedy flats from a list of candidate triples: keep those sharing no pair."""
    used = set()
    flats = []
    for t in picks:
        pairs = set(itertools.combinations(sorted(t), 2))
        if pairs & used:
            continue
        used |= pairs
        flats.append(tuple(sorted(t)))
    return flats


def random_flats(draw_subsets, n):
    """Flats of size 3 or 4 from candidate subsets, greedily pairwise compatible."""
    used = set()
    flats = []
    for t in draw_subsets:
        t = tuple(sorted(set(i % n for i in t)))
        if len(t) < 3:
            continue
        pairs = set(itertools.combinations(t, 2))
        if pairs & used:
            continue
        used |= pairs
        flats.append(t)
    return flats
