"""Shared fixtures and independent brute-force oracles.

The oracles here re-derive expected values straight from the definitions
(sequence enumeration, exhaustive subsets, explicit eigenstructure) and
never call the library code paths they are checking.
"""

from __future__ import annotations

import itertools

import pytest

from lftop import MetricSpace
from lftop.documents import load_space
from lftop.fixtures import (
    cycle_graph,
    eight_point_ring,
    five_point_space,
    grid2d,
    path_graph,
    punctured_grid,
    unit_square_points,
    z_window,
)


@pytest.fixture
def five_point():
    return load_space(five_point_space())


@pytest.fixture
def ring8():
    return load_space(eight_point_ring())


@pytest.fixture
def square_q():
    return load_space(unit_square_points())


def cycle(n):
    return load_space(cycle_graph(n))


def path(n):
    return load_space(path_graph(n))


def coords_index(space):
    return {tuple(int(c) for c in p): i for i, p in enumerate(space.coords)}


# -- independent oracles ----------------------------------------------


def oracle_dnk_literal(space, A, k):
    """Discrete k-neighborhood by direct enumeration of point sequences.

    Walks every sequence x0, x1, ..., xl with l <= k, x0 in A, checking the
    raw chain conditions: values strictly increase, each value is a distance
    to A attained by some point, and no attained distance-to-A value falls
    strictly between consecutive chain values.
    """
    A = sorted(set(A))
    n = space.n
    P = sorted({min(space.key(y, a) for a in A) for y in range(n)})
    Pset = set(P)

    def complete_in_P(values):
        if values[0] != 0:
            return False
        for v in values:
            if v not in Pset:
                return False
        for a, b in zip(values, values[1:]):
            if not a < b:
                return False
            if any(a < p < b for p in P):
                return False
        return True

    out = set(A)
    frontier = [(x0, (0,)) for x0 in A]
    # state: (current sequence endpoint values from x0) — enumerate by DFS
    for x0 in A:
        stack = [((x0,), (0,))]
        while stack:
            seq, values = stack.pop()
            if len(seq) - 1 >= k:
                continue
            for y in range(n):
                v = space.key(x0, y)
                if v <= values[-1]:
                    continue
                nv = values + (v,)
                if complete_in_P(nv):
                    out.add(y)
                    stack.append((seq + (y,), nv))
    return frozenset(out)


def oracle_graph_distance(n, edges):
    """All-pairs shortest paths by plain BFS over an edge list."""
    from collections import deque

    adj = [[] for _ in range(n)]
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    dist = [[None] * n for _ in range(n)]
    for s in range(n):
        dist[s][s] = 0
        dq = deque([s])
        while dq:
            u = dq.popleft()
            for v in adj[u]:
                if dist[s][v] is None:
                    dist[s][v] = dist[s][u] + 1
                    dq.append(v)
    return dist


def all_subsets(ids, max_size=None):
    ids = list(ids)
    max_size = len(ids) if max_size is None else max_size
    for size in range(1, max_size + 1):
        for A in itertools.combinations(ids, size):
            yield A
