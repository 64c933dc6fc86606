"""Nearest-point-preserving maps, their isomorphism predicates, and the
canonical integer-labeled complete graph attached to a graph-type space.

The global isomorphism predicate is a level-structure check: a bijection
preserves complete distance chains in both directions exactly when it
preserves, for every ordered pair (x, y), the position of d(x, y) in the
distance ladder of x. That pairwise condition is symmetric, so one pass
over ordered pairs decides both directions.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .spaces import (
    MetricSpace,
    MetricAxiomError,
    SpaceError,
    discrete_k_neighborhood,
    NotPathConnectedError,
)


class NppError(Exception):
    pass


@dataclass
class PointMap:
    domain: MetricSpace
    codomain: MetricSpace
    table: tuple
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.table = tuple(int(v) for v in self.table)
        if len(self.table) != self.domain.n:
            raise NppError("table must cover the whole domain")
        if any(not (0 <= v < self.codomain.n) for v in self.table):
            raise NppError("table value outside the codomain")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def is_bijective(self) -> bool:
        return self.domain.n == self.codomain.n and len(set(self.table)) == self.domain.n

    def inverse(self) -> "PointMap":
        if not self.is_bijective():
            raise NppError("inverse of a non-bijective map")
        inv = [0] * self.codomain.n
        for x, y in enumerate(self.table):
            inv[y] = x
        return PointMap(self.codomain, self.domain, tuple(inv))


def identity_map(space: MetricSpace) -> PointMap:
    return PointMap(space, space, tuple(range(space.n)))


def compose(g: PointMap, f: PointMap) -> PointMap:
    """g after f."""
    if g.domain is not f.codomain and g.domain.n != f.codomain.n:
        raise NppError("composition domain mismatch")
    return PointMap(f.domain, g.codomain, tuple(g.table[v] for v in f.table))


def is_npp_function(f: PointMap):
    """f(dN1(x)) ⊆ dN1(f(x)) for every x. Returns (ok, witness)."""
    if "npp" in f._cache:
        return f._cache["npp"]
    result = (True, None)
    for x in range(f.domain.n):
        target = f.codomain.dn1(f.table[x])
        for u in sorted(f.domain.dn1(x)):
            if f.table[u] not in target:
                result = (False, (x, u))
                break
        if not result[0]:
            break
    f._cache["npp"] = result
    return result


def is_npp_local_isomorphism(f: PointMap):
    """Bijective, nearest-point-preserving, with nearest-point-preserving inverse."""
    if not f.is_bijective():
        return False, ("not-bijective",)
    ok, w = is_npp_function(f)
    if not ok:
        return False, ("forward",) + w
    ok, w = is_npp_function(f.inverse())
    if not ok:
        return False, ("inverse",) + w
    return True, None


def is_npp_isomorphism(f: PointMap):
    """Level-structure preservation for every ordered pair, both ways.

    Returns (ok, witness); witness = (x, y, domain_index, codomain_index)
    for the lexicographically least mismatch.
    """
    if not f.is_bijective():
        raise NppError("is_npp_isomorphism needs a bijective map")
    if "npp_iso" in f._cache:
        return f._cache["npp_iso"]
    idx_d = f.domain.level_index_matrix()
    idx_c = f.codomain.level_index_matrix()
    t = np.asarray(f.table)
    mapped = idx_c[np.ix_(t, t)]
    if (mapped == idx_d).all():
        result = (True, None)
    else:
        bad = np.argwhere(mapped != idx_d)
        x, y = (int(v) for v in bad[0])
        result = (False, (x, y, int(idx_d[x, y]), int(mapped[x, y])))
    f._cache["npp_iso"] = result
    return result


def subset_transport_check(f: PointMap, kmax: Optional[int] = None, variant="literal"):
    """Brute-force oracle: f(dN_k(A)) = dN_k(f(A)) for every non-empty A.

    Exponential in |X|; intended for spaces with at most ~10 points.
    Returns (ok, witness) with witness = (A, k, lhs, rhs).
    """
    if not f.is_bijective():
        raise NppError("subset transport check needs a bijective map")
    n = f.domain.n
    if kmax is None:
        kmax = n
    ids = list(range(n))
    for size in range(1, n + 1):
        for A in itertools.combinations(ids, size):
            fA = tuple(sorted(f.table[a] for a in A))
            for k in range(1, kmax + 1):
                lhs = frozenset(f.table[v] for v in discrete_k_neighborhood(f.domain, A, k, variant))
                rhs = discrete_k_neighborhood(f.codomain, fA, k, variant)
                if lhs != rhs:
                    return False, (A, k, tuple(sorted(lhs)), tuple(sorted(rhs)))
    return True, None


# -- graph-type spaces and their symbolic graphs ---------------------


class GraphTypeReport(NamedTuple):
    ok: bool
    witness: Optional[tuple]
    exhaustive: bool


def is_graph_type(space: MetricSpace, exhaustive_limit: int = 400) -> GraphTypeReport:
    """Checks the two ball-like axioms of the level-index structure:

    1. symmetry: the level index of y from x equals that of x from y;
    2. additivity: idx(z, x) <= idx(y, x) + idx(y, z) for all triples.

    Exhaustive up to `exhaustive_limit` points, sampled beyond (flagged).
    """
    idx = space.level_index_matrix()
    asym = np.argwhere(idx != idx.T)
    if len(asym):
        x, y = (int(v) for v in asym[0])
        return GraphTypeReport(False, ("symmetry", x, y, int(idx[x, y]), int(idx[y, x])), True)
    n = space.n
    exhaustive = n <= exhaustive_limit
    ys = range(n) if exhaustive else range(0, n, max(1, n // exhaustive_limit))
    for y in ys:
        row = idx[y].astype(np.int64)
        bound = row[:, None] + row[None, :]
        bad = np.argwhere(idx.astype(np.int64) > bound)
        if len(bad):
            x, z = (int(v) for v in bad[0])
            return GraphTypeReport(
                False, ("additivity", x, y, z, int(idx[x, z]), int(row[x] + row[z])), exhaustive
            )
    return GraphTypeReport(True, None, exhaustive)


@dataclass(frozen=True)
class TsGraph:
    """Complete graph with positive integer labels inducing a metric."""

    n: int
    labels: tuple  # row-major tuple of tuples, symmetric, zero diagonal

    def label(self, i: int, j: int) -> int:
        return self.labels[i][j]

    def to_metric_space(self) -> MetricSpace:
        return MetricSpace.from_matrix([[int(v) for v in row] for row in self.labels])

    def document(self) -> dict:
        upper = [int(self.labels[i][j]) for i in range(self.n) for j in range(i + 1, self.n)]
        return {"n": self.n, "labels": upper}


@dataclass
class SymbolicGraphResult:
    ts: TsGraph
    identity: PointMap
    base_points: tuple


def symbolic_graph(space: MetricSpace, bases: int = 3, seed: int = 0) -> SymbolicGraphResult:
    """Canonical integer-labeled complete graph of a path-connected graph-type space.

    The label of (x, y) is the unique h >= 1 with y in dB_h(x) \\ dB_{h-1}(x),
    i.e. the level index of y from x. Verifies that the labels form a metric,
    that the identity map is a full isomorphism of level structures, and that
    rebuilding along the shells of several base points gives identical labels.
    """
    report = is_graph_type(space)
    if not report.ok:
        raise NppError(f"not a graph-type space (witness {report.witness})")
    if len(space.components()) != 1:
        raise NotPathConnectedError(space.components())
    idx = space.level_index_matrix()
    labels = tuple(tuple(int(v) for v in row) for row in idx)

    ts = TsGraph(space.n, labels)
    ts_space = ts.to_metric_space() if space.n > 1 else MetricSpace.from_matrix([[0]])
    # triangle inequality of the labels is re-validated by from_matrix above
    ident = PointMap(space, ts_space, tuple(range(space.n)))
    ok, witness = is_npp_isomorphism(ident)
    if not ok:
        raise NppError(f"identity is not a level-structure isomorphism (witness {witness})")

    # base-point independence: re-derive labels by expanding shells from
    # several bases and checking every pair against the canonical matrix
    rng = np.random.RandomState(seed)
    base_pts = tuple(int(v) for v in rng.choice(space.n, size=min(bases, space.n), replace=False))
    for b in base_pts:
        order = sorted(range(space.n), key=lambda v: (int(idx[b][v]), v))
        seen = {}
        for x in order:
            for y in range(space.n):
                if x == y:
                    continue
                h = int(idx[x][y])
                key = (min(x, y), max(x, y))
                if key in seen:
                    if seen[key] != h:
                        raise NppError(f"shell reconstruction disagrees at {key}: {seen[key]} vs {h}")
                else:
                    seen[key] = h
                if h != labels[x][y]:
                    raise NppError(f"base-point dependence detected at ({x},{y})")
    return SymbolicGraphResult(ts, ident, base_pts)


# -- homotopy of maps ------------------------------------------------


@dataclass
class FunctionHomotopyResult:
    status: str  # "certificate" | "exhausted" | "bounds-exceeded"
    sequence: Optional[list] = None  # list[PointMap], first = f, last = g
    states: int = 0
    method: Optional[str] = None


def _step_sets(space: MetricSpace):
    return tuple(tuple(sorted(set(adj) | {i})) for i, adj in enumerate(space.mutual_adjacency()))


def _hops_from(space: MetricSpace, source: int) -> dict:
    adj = space.mutual_adjacency()
    hop = {source: 0}
    dq = deque([source])
    while dq:
        u = dq.popleft()
        for v in adj[u]:
            if v not in hop:
                hop[v] = hop[u] + 1
                dq.append(v)
    return hop


def _table_is_npp(domain: MetricSpace, codomain: MetricSpace, table) -> bool:
    for x in range(domain.n):
        tgt = codomain.dn1(table[x])
        for u in domain.dn1(x):
            if table[u] not in tgt:
                return False
    return True


def functions_homotopic_search(
    f: PointMap,
    g: PointMap,
    max_steps: int = 64,
    max_states: int = 20000,
) -> FunctionHomotopyResult:
    """Bounded search for a pointwise-continuous chain of NPP maps from f to g.

    Each consecutive pair moves every point by at most one legal step and
    every intermediate map is nearest-point-preserving; points that have
    arrived stay put. Greedy descent toward g is tried first (it finds the
    clamped-shift contractions on line windows), then a bounded exhaustive
    walk over the reachable NPP maps.
    """
    if f.domain is not g.domain or f.codomain is not g.codomain:
        if f.domain.n != g.domain.n or f.codomain.n != g.codomain.n:
            raise NppError("maps must share domain and codomain")
    ok, w = is_npp_function(f)
    if not ok:
        raise NppError(f"f is not nearest-point-preserving (witness {w})")
    ok, w = is_npp_function(g)
    if not ok:
        raise NppError(f"g is not nearest-point-preserving (witness {w})")
    dom, cod = f.domain, f.codomain
    if f.table == g.table:
        return FunctionHomotopyResult("certificate", [f], method="trivial")

    M = _step_sets(cod)
    hops = {t: _hops_from(cod, t) for t in set(g.table)}

    # greedy pointwise descent
    cur = f.table
    seq = [f]
    for _ in range(max_steps):
        nxt = []
        for x, v in enumerate(cur):
            tgt = g.table[x]
            if v == tgt:
                nxt.append(v)
                continue
            h = hops[tgt]
            best = v
            for u in M[v]:
                if u in h and (best not in h or h[u] < h[best]):
                    best = u
            nxt.append(best)
        nxt = tuple(nxt)
        if nxt == cur:
            break
        if not _table_is_npp(dom, cod, nxt):
            break
        seq.append(PointMap(dom, cod, nxt))
        cur = nxt
        if cur == g.table:
            return FunctionHomotopyResult("certificate", seq, method="greedy")

    # bounded exhaustive walk
    start = f.table
    target = g.table
    visited = {start: None}
    dq = deque([start])
    states = 0
    capped = False
    per_state_budget = 20000
    while dq:
        if states >= max_states:
            capped = True
            break
        tab = dq.popleft()
        cand_sets = [M[v] for v in tab]
        total = 1
        for cs in cand_sets:
            total *= len(cs)
            if total > per_state_budget:
                break
        if total > per_state_budget:
            capped = True
            continue
        for combo in itertools.product(*cand_sets):
            if combo == tab or combo in visited:
                continue
            if not _table_is_npp(dom, cod, combo):
                continue
            visited[combo] = tab
            states += 1
            if combo == target:
                chain = []
                cur = combo
                while cur is not None:
                    chain.append(cur)
                    cur = visited[cur]
                chain.reverse()
                maps = [PointMap(dom, cod, t) for t in chain]
                return FunctionHomotopyResult("certificate", maps, states=states, method="bfs")
            dq.append(combo)
    return FunctionHomotopyResult(
        "bounds-exceeded" if capped else "exhausted", None, states=states, method="bfs"
    )
