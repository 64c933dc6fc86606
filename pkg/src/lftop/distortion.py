"""Lower bound on the lp-distortion of a finite metric space.

The bound is assembled from four ingredients computed on the normalized
space (step rescaled to 1): the edge set harvested from coverings of
minimal continuous paths, the maximal edge length (how far the space is
from a graph), the p-spectral gap of the edge set, and the bottleneck
displacement over permutations. Only p = 2 is exact (dense symmetric
eigensolve); other p values carry a descent-estimated gap and the report
says so.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .exact import Dist, rational_token
from .spaces import (
    MetricSpace,
    NotPathConnectedError,
    SpaceError,
    step_and_normal_form,
    subspace,
)


class DistortionError(Exception):
    pass


def minimal_continuous_paths(space: MetricSpace, x: int, y: int, max_paths: int = 100000):
    """All step-minimal continuous paths from x to y (no stays).

    Callers that feed coverings must pass a space in normal form; the
    path enumeration itself only uses the step relation.
    """
    from collections import deque

    if x == y:
        return [(x,)]
    adj = space.mutual_adjacency()
    dist = {x: 0}
    dq = deque([x])
    while dq:
        u = dq.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                dq.append(v)
    if y not in dist:
        raise NotPathConnectedError(space.components())
    paths = []

    def back(v, acc):
        if len(paths) >= max_paths:
            raise DistortionError(f"more than {max_paths} minimal paths for ({x},{y})")
        if v == x:
            paths.append(tuple(reversed(acc + [x])))
            return
        for u in adj[v]:
            if dist.get(u, -1) == dist[v] - 1:
                back(u, acc + [v])

    back(y, [])
    return sorted(paths)


@dataclass(frozen=True)
class Covering:
    """Interval covering of path indices 0..n by s parts sharing endpoints."""

    parts: tuple  # tuple of index tuples

    def endpoints(self, path):
        return [(path[p[0]], path[p[-1]]) for p in self.parts]


def coverings(space: MetricSpace, x: int, y: int, path: Sequence[int]):
    """All coverings of {0..n} into floor(d(x,y)) ordered overlapping intervals."""
    path = tuple(path)
    n = len(path) - 1
    if path[0] != x or path[-1] != y:
        raise DistortionError("path endpoints do not match (x, y)")
    s = space.dist(x, y).floor()
    if s < 1:
        raise DistortionError("floor(d(x,y)) < 1: space not in normal form or x == y")
    out = []
    for mids in itertools.combinations(range(1, n), s - 1):
        bk = (0,) + mids + (n,)
        parts = tuple(tuple(range(bk[i], bk[i + 1] + 1)) for i in range(s))
        out.append(Covering(parts))
    return out


@dataclass(frozen=True)
class EdgeSet:
    pairs: frozenset  # frozenset of (i, j) with i < j
    mode: str  # "all" | "single"

    def __len__(self):
        return len(self.pairs)

    def sorted_pairs(self):
        return sorted(self.pairs)


def edge_set(space: MetricSpace, mode: str = "all") -> EdgeSet:
    """Union over point pairs, minimal paths and coverings of part endpoints.

    mode="all" ranges over every minimal path (canonical); mode="single"
    uses only the lexicographically least path per pair (cheaper, may
    miss edges; divergence is observable by comparing the two modes).
    """
    if mode not in ("all", "single"):
        raise DistortionError(f"unknown edge mode {mode!r}")
    if len(space.components()) != 1:
        raise NotPathConnectedError(space.components())
    if space.n >= 2:
        step = space.value_of_key(space.minpos_key(0))
        if step != Dist(1):
            raise DistortionError("edge_set needs a normal-form space (step 1)")
    pairs = set()
    for x in range(space.n):
        for y in range(x + 1, space.n):
            paths = minimal_continuous_paths(space, x, y)
            if mode == "single":
                paths = paths[:1]
            for path in paths:
                for cov in coverings(space, x, y, path):
                    for a, b in cov.endpoints(path):
                        pairs.add((min(a, b), max(a, b)))
    return EdgeSet(frozenset(pairs), mode)


def metric_defect(space: MetricSpace, edges: Optional[EdgeSet] = None) -> Dist:
    """Maximal distance across an edge; 1 exactly when the metric is a graph metric."""
    if edges is None:
        edges = edge_set(space)
    if not edges.pairs:
        raise DistortionError("empty edge set")
    return max((space.dist(i, j) for i, j in edges.pairs))


@dataclass
class SpectralGap:
    value: float
    p: float
    exact: bool
    minimizer: np.ndarray
    diagnostics: dict


def _offset_pth_power(f: np.ndarray, p: float) -> float:
    """min over real alpha of sum |f - alpha|^p (convex), coarse-to-fine grid."""
    lo, hi = float(f.min()), float(f.max())
    if lo == hi:
        return 0.0
    best = None
    for _ in range(5):
        als = np.linspace(lo, hi, 33)
        vals = (np.abs(f[None, :] - als[:, None]) ** p).sum(axis=1)
        i = int(vals.argmin())
        best = float(vals[i])
        lo, hi = float(als[max(0, i - 1)]), float(als[min(32, i + 1)])
    return best


def spectral_gap_p(space: MetricSpace, edges: EdgeSet, p: float) -> SpectralGap:
    """p-spectral gap of the edge set: inf over nonconstant f of
    sum_E |f(e+) - f(e-)|^p / min_alpha sum |f - alpha|^p.

    p = 2 is the exact second-smallest Laplacian eigenvalue; p != 2 is an
    upper estimate by projected subgradient descent with random restarts.
    """
    if p < 1:
        raise DistortionError("p must be >= 1")
    n = space.n
    if n < 2:
        raise DistortionError("spectral gap needs at least 2 points")
    E = edges.sorted_pairs()
    L = np.zeros((n, n))
    for i, j in E:
        L[i, i] += 1
        L[j, j] += 1
        L[i, j] -= 1
        L[j, i] -= 1
    vals, vecs = np.linalg.eigh(L)
    lam2 = float(vals[1])
    fied = vecs[:, 1]
    if p == 2:
        return SpectralGap(
            value=lam2,
            p=p,
            exact=True,
            minimizer=fied,
            diagnostics={"method": "dense-eigh", "zero_mode": float(vals[0]), "edges": len(E)},
        )

    ei = np.array([e[0] for e in E])
    ej = np.array([e[1] for e in E])

    def objective(f):
        den = _offset_pth_power(f, p)
        if den <= 0:
            return np.inf
        num = float(np.abs(f[ej] - f[ei]).__pow__(p).sum())
        return num / den

    def subgrad(f):
        d = f[ej] - f[ei]
        g_num = np.zeros(n)
        w = p * np.sign(d) * np.abs(d) ** (p - 1)
        np.add.at(g_num, ej, w)
        np.add.at(g_num, ei, -w)
        return g_num

    rng = np.random.RandomState(20240)
    starts = [fied] + [rng.standard_normal(n) for _ in range(20)]
    best_val, best_f, best_start = np.inf, None, -1
    iters = 200
    for si, f0 in enumerate(starts):
        f = f0 - f0.mean()
        nrm = np.abs(f).max()
        if nrm == 0:
            continue
        f = f / nrm
        for t in range(iters):
            den = _offset_pth_power(f, p)
            if den <= 0:
                break
            num = float(np.abs(f[ej] - f[ei]).__pow__(p).sum())
            val = num / den
            if val < best_val:
                best_val, best_f, best_start = val, f.copy(), si
            g = subgrad(f) / den  # descent direction for num/den at fixed den scale
            step = 0.2 / (1 + t / 40)
            f = f - step * g / max(1e-12, np.abs(g).max())
            f = f - f.mean()
            nrm = np.abs(f).max()
            if nrm == 0:
                break
            f = f / nrm
        den = _offset_pth_power(f, p)
        if den > 0:
            val = float(np.abs(f[ej] - f[ei]).__pow__(p).sum()) / den
            if val < best_val:
                best_val, best_f, best_start = val, f.copy(), si
    return SpectralGap(
        value=best_val,
        p=p,
        exact=False,
        minimizer=best_f,
        diagnostics={
            "method": "projected-subgradient",
            "restarts": len(starts),
            "iterations": iters,
            "best_restart": best_start,
            "edges": len(E),
        },
    )


def displacement(space: MetricSpace):
    """Bottleneck displacement: max over permutations of min_x d(x, perm(x)).

    Exact via binary search over distinct distance values with a perfect
    matching test at each threshold. Returns (value, permutation).
    """
    n = space.n
    if n < 2:
        raise DistortionError("displacement needs at least 2 points")
    keys = sorted({space.key(i, j) for i in range(n) for j in range(i + 1, n)})

    def matching(tkey):
        adjs = [[j for j in range(n) if j != i and space.key(i, j) >= tkey] for i in range(n)]
        match_r = [-1] * n

        def augment(u, seen):
            for v in adjs[u]:
                if v in seen:
                    continue
                seen.add(v)
                if match_r[v] < 0 or augment(match_r[v], seen):
                    match_r[v] = u
                    return True
            return False

        for u in range(n):
            if not augment(u, set()):
                return None
        perm = [0] * n
        for v, u in enumerate(match_r):
            perm[u] = v
        return tuple(perm)

    lo, hi = 0, len(keys) - 1
    best = None
    while lo <= hi:
        mid = (lo + hi) // 2
        perm = matching(keys[mid])
        if perm is not None:
            best = (keys[mid], perm)
            lo = mid + 1
        else:
            hi = mid - 1
    if best is None:
        raise DistortionError("no fixed-point-free assignment exists")
    return space.value_of_key(best[0]), best[1]


@dataclass
class BoundReport:
    p: float
    n_points: int
    edge_count: int
    edges_mode: str
    step: str
    defect: str
    defect_float: float
    displacement: str
    displacement_float: float
    displacement_witness: tuple
    spectral_gap: float
    spectral_exact: bool
    spectral_diagnostics: dict
    bound: float
    heuristic_lambda: bool

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "n_points": self.n_points,
            "edge_count": self.edge_count,
            "edges_mode": self.edges_mode,
            "step": self.step,
            "defect": self.defect,
            "defect_float": self.defect_float,
            "displacement": self.displacement,
            "displacement_float": self.displacement_float,
            "displacement_witness": list(self.displacement_witness),
            "spectral_gap": self.spectral_gap,
            "spectral_exact": self.spectral_exact,
            "spectral_diagnostics": self.spectral_diagnostics,
            "bound": self.bound,
            "heuristic_lambda": self.heuristic_lambda,
        }


def distortion_lower_bound(space: MetricSpace, p: float, edges_mode: str = "all") -> BoundReport:
    """Assemble the lower bound (D / 2d) * (|X| / (|E| * lambda_p))^(1/p)."""
    if len(space.components()) != 1:
        raise NotPathConnectedError(space.components())
    if space.n < 2:
        raise DistortionError("need at least 2 points; singleton components are skipped upstream")
    step, norm = step_and_normal_form(space)
    E = edge_set(norm, mode=edges_mode)
    d = metric_defect(norm, E)
    gap = spectral_gap_p(norm, E, p)
    D, perm = displacement(norm)
    bound = (float(D) / (2.0 * float(d))) * (norm.n / (len(E) * gap.value)) ** (1.0 / p)
    return BoundReport(
        p=p,
        n_points=norm.n,
        edge_count=len(E),
        edges_mode=edges_mode,
        step=step.token(),
        defect=d.token(),
        defect_float=float(d),
        displacement=D.token(),
        displacement_float=float(D),
        displacement_witness=perm,
        spectral_gap=gap.value,
        spectral_exact=gap.exact,
        spectral_diagnostics=gap.diagnostics,
        bound=bound,
        heuristic_lambda=not gap.exact,
    )


@dataclass
class ComponentsBoundReport:
    p: float
    per_component: list  # list of dicts: {"ids", "skipped"} or {"ids", "report"}
    bound: Optional[float]

    def as_dict(self) -> dict:
        rows = []
        for row in self.per_component:
            if "report" in row:
                rows.append({"ids": row["ids"], "report": row["report"].as_dict()})
            else:
                rows.append(row)
        return {"p": self.p, "per_component": rows, "bound": self.bound}


def distortion_lower_bound_components(space: MetricSpace, p: float, edges_mode: str = "all") -> ComponentsBoundReport:
    """Supremum of the per-component bounds (components normalized separately)."""
    rows = []
    best = None
    for comp in space.components():
        if len(comp) < 2:
            rows.append({"ids": list(comp), "skipped": "singleton component"})
            continue
        sub = subspace(space, comp)
        rep = distortion_lower_bound(sub, p, edges_mode=edges_mode)
        rows.append({"ids": list(comp), "report": rep})
        if best is None or rep.bound > best:
            best = rep.bound
    return ComponentsBoundReport(p=p, per_component=rows, bound=best)
