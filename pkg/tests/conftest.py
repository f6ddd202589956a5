"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from rainbowpath.model import ClusteredGraph, Layout, f
from rainbowpath.realize import ColoredGraphSystem


def random_rational_graph(rnd: random.Random, k: int, zero_prob: float = 0.5,
                          max_num: int = 12) -> ClusteredGraph:
    """Random exact point of the weight simplex with a sparse support."""
    lay = Layout(k)
    nums = [0 if rnd.random() < zero_prob else rnd.randint(0, max_num)
            for _ in range(lay.dim)]
    if sum(nums) == 0:
        nums[rnd.randrange(lay.dim)] = 1
    total = sum(nums)
    weights = [Fraction(v, total) for v in nums]
    b = {p: weights[t] for t, p in enumerate(lay.pairs) if weights[t] != 0}
    return ClusteredGraph(k, b, tuple(weights[lay.m:lay.m + k]), weights[-1])


def exact_min_leq_f(vec, k: int, pairs) -> bool:
    """True iff min_i d_i <= f(k), in exact integer arithmetic.

    vec is any float point of the simplex; its binary values are taken
    exactly (scaled to a common power-of-two denominator), so the check
    is rigorous for the rationalized sample without any normalization.
    """
    m = len(pairs)
    ratios = [float(v).as_integer_ratio() for v in vec]
    D = max(r[1] for r in ratios)
    ints = [num * (D // den) for num, den in ratios]
    S = sum(ints)
    a, xq = ints[m:m + k], ints[-1]
    b_row = [0] * k
    bsq = [0] * k
    for t, (i, j) in enumerate(pairs):
        w = ints[t]
        b_row[i - 1] += w
        b_row[j - 1] += w
        ww = w * w
        bsq[i - 1] += ww
        bsq[j - 1] += ww
    p, q = f(k).numerator, f(k).denominator
    bound = p * S * S
    return any(q * (a[i] * a[i] + bsq[i] + 2 * a[i] * (b_row[i] + xq)) <= bound
               for i in range(k))


def brute_force_rainbow_exists(system: ColoredGraphSystem, length: int, kind: str,
                               nonbacktracking: bool = False) -> bool:
    """Enumerate every vertex sequence and every injective color assignment."""
    verts = range(1, system.n + 1)
    colors = range(1, system.k + 1)
    for seq in itertools.product(verts, repeat=length + 1):
        if kind == "path":
            if len(set(seq)) != length + 1:
                continue
        else:
            if any(seq[t] == seq[t + 1] for t in range(length)):
                continue
            if nonbacktracking and any(seq[t] == seq[t + 2] for t in range(length - 1)):
                continue
        slot_edges = [tuple(sorted((seq[t], seq[t + 1]))) for t in range(length)]
        for assignment in itertools.permutations(colors, length):
            if all(e in system.edges[c - 1] for e, c in zip(slot_edges, assignment)):
                return True
    return False


def random_system(rnd: random.Random, max_n: int = 8, max_k: int = 4,
                  density: float | None = None) -> ColoredGraphSystem:
    n = rnd.randint(2, max_n)
    k = rnd.randint(1, max_k)
    p = rnd.uniform(0.1, 0.5) if density is None else density
    edge_sets = []
    for _ in range(k):
        es = {(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)
              if rnd.random() < p}
        edge_sets.append(frozenset(es))
    return ColoredGraphSystem(n, k, tuple(edge_sets))


@pytest.fixture
def rnd():
    return random.Random(20240817)
