"""Finite (or windowed) locally finite metric spaces with exact distances.

A space is a dense range of point ids 0..n-1 plus an exact pairwise
distance structure. Distances are stored as comparison keys: for
"plain" spaces the key IS the (rational) distance, for "sqrt" spaces
(Euclidean point clouds) the key is the squared distance. All level
and chain machinery only ever compares keys, which is exact in both
representations.

Integer-valued keys live in a numpy int64 matrix so large windows stay
fast; everything else falls back to Fraction tables.
"""

from __future__ import annotations

import hashlib
import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .exact import Dist, Rational, parse_rational, rational_token


class SpaceError(Exception):
    """Base class for space construction/operation failures."""


class MetricAxiomError(SpaceError):
    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class DisconnectedGraphError(SpaceError):
    def __init__(self, components):
        super().__init__(f"graph input is disconnected: {len(components)} components")
        self.components = components


class DocumentFormatError(SpaceError):
    pass


class NotPathConnectedError(SpaceError):
    def __init__(self, components, witness=None):
        msg = f"space is not path-connected ({len(components)} components)"
        if witness is not None:
            msg += f"; nearest-radius witness pair {witness}"
        super().__init__(msg)
        self.components = components
        self.witness = witness


class UnsupportedOperationError(SpaceError):
    pass


class DegenerateSpaceError(SpaceError):
    pass


class WindowError(SpaceError):
    pass


@dataclass(frozen=True)
class Window:
    """Truncation marker for a finite window of an infinite ambient space.

    ``rim`` holds the ids on the truncation frontier; anything within
    metric distance < ``margin`` of the rim is the contamination zone.
    """

    margin: Fraction
    rim: tuple


@dataclass(frozen=True)
class ChainLevels:
    """The strictly increasing ladder of distinct distances from a base point."""

    base: int
    levels: tuple  # tuple[Dist]
    members: tuple  # tuple[tuple[int, ...]]

    def index_of(self, value: Dist) -> int:
        for i, v in enumerate(self.levels):
            if v == value:
                return i
        raise KeyError(value)


class MetricSpace:
    """Immutable finite metric space; build via the from_* factories."""

    def __init__(self, n, kind, keys, coords=None, window=None, meta=None):
        self.n = int(n)
        self.kind = kind  # "plain" | "sqrt"
        self._K = keys  # np.ndarray int64 or tuple of tuples of Fraction/int
        self.coords = coords
        self.window = window
        self.meta = meta or {}
        self._int = isinstance(keys, np.ndarray)
        # lazy caches
        self._minpos = None
        self._levels_cache: dict = {}
        self._idx_matrix = None
        self._mutual = None
        self._components = None
        self._zone = None

    # -- construction ------------------------------------------------

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[Rational]], window=None, validate_triangle=True):
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DocumentFormatError("distance matrix must be square and non-empty")
        M = [[parse_rational(v) if not isinstance(v, Fraction) else v for v in r] for r in rows]
        for i in range(n):
            if M[i][i] != 0:
                raise MetricAxiomError(f"d({i},{i}) = {M[i][i]} != 0", triple=(i, i, i))
            for j in range(i + 1, n):
                if M[i][j] != M[j][i]:
                    raise MetricAxiomError(f"asymmetric: d({i},{j}) != d({j},{i})", triple=(i, j, j))
                if M[i][j] <= 0:
                    raise MetricAxiomError(f"d({i},{j}) = {M[i][j]} must be positive", triple=(i, j, j))
        if validate_triangle:
            for i in range(n):
                for j in range(n):
                    if j == i:
                        continue
                    dij = M[i][j]
                    for k in range(n):
                        if M[i][k] > dij + M[j][k]:
                            raise MetricAxiomError(
                                f"triangle violation: d({i},{k}) > d({i},{j}) + d({j},{k})",
                                triple=(i, j, k),
                            )
        if all(v.denominator == 1 for r in M for v in r):
            keys = np.array([[int(v) for v in r] for r in M], dtype=np.int64)
        else:
            keys = tuple(tuple(r) for r in M)
        meta = {"kind": "matrix", "d": [[rational_token(v) for v in r] for r in M]}
        return cls(n, "plain", keys, window=window, meta=meta)

    @classmethod
    def from_points(cls, points: Sequence[Sequence[Rational]], metric="euclidean", window=None):
        if not points:
            raise DocumentFormatError("empty point list")
        dim = len(points[0])
        if any(len(p) != dim for p in points):
            raise DocumentFormatError("points must share a dimension")
        pts = [tuple(parse_rational(c) if not isinstance(c, Fraction) else c for c in p) for p in points]
        if len(set(pts)) != len(pts):
            dup = next(p for p in pts if pts.count(p) > 1)
            raise MetricAxiomError(f"duplicate point {dup}: d=0 between distinct ids")
        integral = all(c.denominator == 1 for p in pts for c in p)
        n = len(pts)
        if metric not in ("euclidean", "l1"):
            raise DocumentFormatError(f"unknown point metric {metric!r}")
        if integral:
            arr = np.array([[int(c) for c in p] for p in pts], dtype=np.int64)
            diff = arr[:, None, :] - arr[None, :, :]
            if metric == "euclidean":
                keys = (diff * diff).sum(axis=2)
                kind = "sqrt"
            else:
                keys = np.abs(diff).sum(axis=2)
                kind = "plain"
        else:
            keys_l = []
            for p in pts:
                row = []
                for q in pts:
                    if metric == "euclidean":
                        row.append(sum((a - b) ** 2 for a, b in zip(p, q)))
                    else:
                        row.append(sum(abs(a - b) for a, b in zip(p, q)))
                keys_l.append(tuple(row))
            keys = tuple(keys_l)
            kind = "sqrt" if metric == "euclidean" else "plain"
        coord_kind = "integer" if integral else "rational"
        meta = {
            "kind": "points",
            "coords": coord_kind,
            "metric": metric,
            "points": [[rational_token(c) if coord_kind == "rational" else int(c) for c in p] for p in pts],
        }
        space = cls(n, kind, keys, coords=tuple(pts), window=None, meta=meta)
        if window is not None:
            space.window = cls._resolve_window(space, window)
        return space

    @classmethod
    def from_graph(cls, n: int, edges: Iterable[Sequence[int]], window=None):
        n = int(n)
        if n <= 0:
            raise DocumentFormatError("graph must have at least one vertex")
        adj = [[] for _ in range(n)]
        eset = set()
        for e in edges:
            if len(e) != 2:
                raise DocumentFormatError(f"bad edge {e!r}")
            i, j = int(e[0]), int(e[1])
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise DocumentFormatError(f"bad edge {e!r}")
            if (min(i, j), max(i, j)) in eset:
                continue
            eset.add((min(i, j), max(i, j)))
            adj[i].append(j)
            adj[j].append(i)
        K = np.full((n, n), -1, dtype=np.int64)
        for s in range(n):
            K[s, s] = 0
            dq = deque([s])
            while dq:
                u = dq.popleft()
                for v in adj[u]:
                    if K[s, v] < 0:
                        K[s, v] = K[s, u] + 1
                        dq.append(v)
        if (K < 0).any():
            comps = []
            seen = set()
            for s in range(n):
                if s in seen:
                    continue
                comp = sorted(j for j in range(n) if K[s, j] >= 0)
                seen.update(comp)
                comps.append(tuple(comp))
            raise DisconnectedGraphError(tuple(comps))
        meta = {"kind": "graph", "n": n, "edges": sorted(eset)}
        space = cls(n, "plain", K, window=None, meta=meta)
        space.window = cls._resolve_window(space, window) if window is not None else None
        return space

    @staticmethod
    def _resolve_window(space, window) -> Window:
        if isinstance(window, Window):
            return window
        margin = parse_rational(window.get("margin", 1))
        if margin < 0:
            raise WindowError("margin must be nonnegative")
        rim = window.get("rim")
        if rim is not None:
            rim = tuple(sorted(int(i) for i in rim))
            if any(not (0 <= i < space.n) for i in rim):
                raise WindowError("rim id out of range")
        else:
            if space.coords is None:
                raise WindowError("windowed space without coordinates needs an explicit rim")
            lo = [min(p[d] for p in space.coords) for d in range(len(space.coords[0]))]
            hi = [max(p[d] for p in space.coords) for d in range(len(space.coords[0]))]
            rim = tuple(
                i
                for i, p in enumerate(space.coords)
                if any(c == lo[d] or c == hi[d] for d, c in enumerate(p))
            )
        return Window(margin=margin, rim=rim)

    # -- exact access ------------------------------------------------

    def key(self, i: int, j: int):
        v = self._K[i][j] if not self._int else self._K[i, j]
        return int(v) if self._int else v

    def dist(self, i: int, j: int) -> Dist:
        return Dist(self.key(i, j), root=(self.kind == "sqrt"))

    def value_of_key(self, key) -> Dist:
        return Dist(key, root=(self.kind == "sqrt"))

    def row_keys(self, i: int):
        return self._K[i]

    def minpos_key(self, i: int):
        if self._minpos is None:
            if self.n == 1:
                self._minpos = [None]
            elif self._int:
                K = self._K.copy()
                np.fill_diagonal(K, np.iinfo(np.int64).max)
                self._minpos = [int(v) for v in K.min(axis=1)]
            else:
                self._minpos = [
                    min(self._K[a][b] for b in range(self.n) if b != a) for a in range(self.n)
                ]
        return self._minpos[i]

    def dn1(self, i: int) -> frozenset:
        """Discrete 1-neighborhood: i plus all points at its nearest positive distance."""
        mp = self.minpos_key(i)
        if mp is None:
            return frozenset((i,))
        if self._int:
            out = np.nonzero(self._K[i] == mp)[0]
            return frozenset(int(v) for v in out) | {i}
        return frozenset(j for j in range(self.n) if j != i and self._K[i][j] == mp) | {i}

    def mutual_neighbors(self, i: int) -> frozenset:
        """Points j != i with j in dN1(i) and i in dN1(j): the step relation."""
        return frozenset(j for j in self.dn1(i) - {i} if i in self.dn1(j))

    def mutual_adjacency(self):
        if self._mutual is None:
            self._mutual = tuple(tuple(sorted(self.mutual_neighbors(i))) for i in range(self.n))
        return self._mutual

    def components(self):
        """Partition of ids under the transitive closure of the step relation."""
        if self._components is None:
            adj = self.mutual_adjacency()
            seen = [False] * self.n
            comps = []
            for s in range(self.n):
                if seen[s]:
                    continue
                comp = []
                dq = deque([s])
                seen[s] = True
                while dq:
                    u = dq.popleft()
                    comp.append(u)
                    for v in adj[u]:
                        if not seen[v]:
                            seen[v] = True
                            dq.append(v)
                comps.append(tuple(sorted(comp)))
            self._components = tuple(sorted(comps))
        return self._components

    def levels(self, base: int) -> ChainLevels:
        if base not in self._levels_cache:
            if self._int:
                vals, inv = np.unique(self._K[base], return_inverse=True)
                members = [[] for _ in vals]
                for j, g in enumerate(inv):
                    members[g].append(j)
                levels = tuple(self.value_of_key(int(v)) for v in vals)
                self._levels_cache[base] = ChainLevels(
                    base, levels, tuple(tuple(m) for m in members)
                )
            else:
                row = self._K[base]
                vals = sorted(set(row))
                idx = {v: t for t, v in enumerate(vals)}
                members = [[] for _ in vals]
                for j in range(self.n):
                    members[idx[row[j]]].append(j)
                levels = tuple(self.value_of_key(v) for v in vals)
                self._levels_cache[base] = ChainLevels(
                    base, levels, tuple(tuple(m) for m in members)
                )
        return self._levels_cache[base]

    def level_index_matrix(self):
        """idx[i, j] = position of d(i,j) in the distance ladder of i."""
        if self._idx_matrix is None:
            idx = np.zeros((self.n, self.n), dtype=np.int32)
            for i in range(self.n):
                if self._int:
                    _, inv = np.unique(self._K[i], return_inverse=True)
                    idx[i] = inv
                else:
                    row = self._K[i]
                    vals = sorted(set(row))
                    pos = {v: t for t, v in enumerate(vals)}
                    idx[i] = [pos[v] for v in row]
            self._idx_matrix = idx
        return self._idx_matrix

    # -- window machinery ---------------------------------------------

    def zone(self) -> frozenset:
        """Ids within metric distance < margin of the window rim (contaminated)."""
        if self.window is None:
            return frozenset()
        if self._zone is None:
            rim = list(self.window.rim)
            m = self.window.margin
            mins = set_distance_keys(self, rim)
            thr = m * m if self.kind == "sqrt" else m
            if self._int:
                mask = _key_lt_fraction(np.asarray(mins), thr)
                self._zone = frozenset(int(i) for i in np.nonzero(mask)[0])
            else:
                self._zone = frozenset(i for i in range(self.n) if mins[i] < thr)
        return self._zone

    def interior_ids(self) -> tuple:
        z = self.zone()
        return tuple(i for i in range(self.n) if i not in z)

    def contaminated(self, ids: Iterable[int]) -> bool:
        z = self.zone()
        return any(i in z for i in ids)

    # -- misc ----------------------------------------------------------

    def is_graph_metric(self) -> bool:
        return self.meta.get("kind") == "graph"

    def document(self) -> dict:
        doc = json.loads(json.dumps(self.meta))
        if self.window is not None:
            doc["window"] = {
                "margin": rational_token(self.window.margin),
                "rim": list(self.window.rim),
            }
        return doc

    def digest(self) -> str:
        blob = json.dumps(self.document(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def __repr__(self):
        w = ", windowed" if self.window else ""
        return f"MetricSpace(n={self.n}, kind={self.kind}{w})"


def _key_lt_fraction(keys: np.ndarray, bound: Fraction) -> np.ndarray:
    if bound.denominator == 1:
        return keys < int(bound)
    return keys * bound.denominator < bound.numerator


def _key_le_fraction(keys: np.ndarray, bound: Fraction) -> np.ndarray:
    if bound.denominator == 1:
        return keys <= int(bound)
    return keys * bound.denominator <= bound.numerator


def set_distance_keys(space: MetricSpace, A: Sequence[int]):
    """Per-point key of the distance to the set A (min over members)."""
    ids = list(A)
    if space._int:
        return space._K[ids].min(axis=0)
    return [min(space._K[a][y] for a in ids) for y in range(space.n)]


# -- operations ------------------------------------------------------


def _check_ids(space, ids):
    for i in ids:
        if not (0 <= int(i) < space.n):
            raise SpaceError(f"unknown point id {i}")


def discrete_one_neighborhood(space: MetricSpace, x: int) -> frozenset:
    """x together with every point at its minimal positive distance."""
    _check_ids(space, [x])
    return space.dn1(x)


def distance_levels(space: MetricSpace, base: int) -> ChainLevels:
    """Strictly increasing distinct distances from base with their members."""
    _check_ids(space, [base])
    return space.levels(base)


def discrete_k_neighborhood(space: MetricSpace, A: Iterable[int], k: int, variant="literal") -> frozenset:
    """Points reachable from A by a chain of at most k strictly increasing,
    gap-free distance values.

    variant="literal": chain values must be consecutive members of
    P = {d(y, A) : y in space}. variant="strict": consecutive members of
    the per-basepoint ladder {d(x0, y) : y in space}. Both coincide on
    connected graphs.
    """
    A = sorted(set(int(a) for a in A))
    if not A:
        raise SpaceError("A must be non-empty")
    _check_ids(space, A)
    if k < 0:
        raise SpaceError("k must be >= 0")
    if variant not in ("literal", "strict"):
        raise SpaceError(f"unknown variant {variant!r}")

    if variant == "strict":
        out = set()
        idx = space.level_index_matrix()
        for x0 in A:
            row = idx[x0]
            out.update(int(j) for j in np.nonzero(row <= k)[0])
        return frozenset(out)

    mins = set_distance_keys(space, A)
    if space._int:
        if k == 1:
            # one chain step: the only admissible positive value is the first
            # positive set distance, and reaching it realizes it
            sub = space._K[A]
            pos = sub[sub > 0]
            if pos.size == 0:
                return frozenset(A)
            mins_arr = np.asarray(mins)
            p1 = int(mins_arr[mins_arr > 0].min()) if (mins_arr > 0).any() else None
            if p1 is None:
                return frozenset(A)
            claimed = (sub == p1).any(axis=0)
            return frozenset(int(i) for i in np.nonzero(claimed)[0]) | frozenset(A)
        P = np.unique(np.asarray(mins))
        claimed = np.zeros(space.n, dtype=bool)
        for x0 in A:
            row = space._K[x0]
            V = np.unique(row)
            present = np.isin(P, V)
            m = int(np.argmin(present)) if not present.all() else len(P)
            jmax = min(k, m - 1)
            if jmax >= 0:
                claimed |= np.isin(row, P[: jmax + 1])
        return frozenset(int(i) for i in np.nonzero(claimed)[0])

    P = sorted(set(mins))
    out = set()
    for x0 in A:
        row = space._K[x0]
        V = set(row)
        m = 0
        while m < len(P) and P[m] in V:
            m += 1
        jmax = min(k, m - 1)
        allowed = set(P[: jmax + 1])
        out.update(j for j in range(space.n) if row[j] in allowed)
    return frozenset(out)


def discrete_k_boundary(space: MetricSpace, A: Iterable[int], k: int, variant="literal") -> frozenset:
    """dN_k(A) minus A."""
    A = frozenset(int(a) for a in A)
    return discrete_k_neighborhood(space, A, k, variant=variant) - A


def k_boundary(space: MetricSpace, A: Iterable[int], k: int) -> frozenset:
    """Full k-boundary; on locally finite spaces the continuous part is empty,
    so this is an alias of the discrete k-boundary."""
    return discrete_k_boundary(space, A, k)


def closed_neighborhood(space: MetricSpace, A: Iterable[int], alpha) -> frozenset:
    """{x : d(x, A) <= alpha} for an exact nonnegative alpha."""
    A = sorted(set(int(a) for a in A))
    if not A:
        raise SpaceError("A must be non-empty")
    _check_ids(space, A)
    a = alpha if isinstance(alpha, Dist) else Dist(alpha)
    thr = a.square
    mins = set_distance_keys(space, A)
    if space._int:
        keys = np.asarray(mins)
        key_sq = keys if space.kind == "sqrt" else keys * keys
        mask = _key_le_fraction(key_sq, thr)
        return frozenset(int(i) for i in np.nonzero(mask)[0])
    out = set()
    for i in range(space.n):
        ksq = mins[i] if space.kind == "sqrt" else mins[i] * mins[i]
        if ksq <= thr:
            out.add(i)
    return frozenset(out)


def subspace(space: MetricSpace, ids: Sequence[int]) -> MetricSpace:
    """Restriction of the space to a subset of ids (re-indexed densely)."""
    ids = [int(i) for i in ids]
    _check_ids(space, ids)
    if space._int:
        keys = space._K[np.ix_(ids, ids)]
    else:
        keys = tuple(tuple(space._K[i][j] for j in ids) for i in ids)
    coords = tuple(space.coords[i] for i in ids) if space.coords is not None else None
    window = None
    if space.window is not None:
        pos = {v: t for t, v in enumerate(ids)}
        rim = tuple(pos[r] for r in space.window.rim if r in pos)
        window = Window(space.window.margin, rim) if rim else None
    meta = {"kind": "subspace", "base": space.meta, "ids": list(ids)}
    return MetricSpace(len(ids), space.kind, keys, coords=coords, window=window, meta=meta)


def rescaled(space: MetricSpace, c: Rational) -> MetricSpace:
    """Copy of the space with every distance multiplied by the rational c > 0."""
    c = Fraction(c)
    if c <= 0:
        raise SpaceError("scale must be positive")
    factor = c * c if space.kind == "sqrt" else c
    if space._int and factor.denominator == 1:
        keys = space._K * int(factor)
    else:
        keys = tuple(
            tuple(space.key(i, j) * factor for j in range(space.n)) for i in range(space.n)
        )
    meta = {"kind": "scaled", "base": space.meta, "scale": rational_token(c)}
    return MetricSpace(space.n, space.kind, keys, coords=None, window=space.window, meta=meta)


def step_and_normal_form(space: MetricSpace):
    """The common nearest-point radius and the space rescaled to step 1.

    Requires a path-connected space; the radius is then constant because
    adjacent points share it. A non-constant radius is reported as a
    path-connectedness failure with a witness pair.
    """
    comps = space.components()
    if len(comps) > 1:
        raise NotPathConnectedError(comps)
    if space.n == 1:
        return Dist(1), space
    r0 = space.minpos_key(0)
    for i in range(1, space.n):
        if space.minpos_key(i) != r0:
            raise NotPathConnectedError(comps, witness=(0, i))
    step = space.value_of_key(r0)
    if step == Dist(1):
        return step, space
    # dividing every key by the step key rescales values by 1/step in both
    # representations (keys are squares for sqrt spaces)
    keys = tuple(
        tuple(Fraction(space.key(i, j)) / Fraction(r0) for j in range(space.n))
        for i in range(space.n)
    )
    if all(v.denominator == 1 for row in keys for v in row):
        keys = np.array([[int(v) for v in row] for row in keys], dtype=np.int64)
    meta = {"kind": "normalized", "base": space.meta}
    out = MetricSpace(space.n, space.kind, keys, coords=None, window=space.window, meta=meta)
    return step, out


def l1_product(X: MetricSpace, Y: MetricSpace) -> MetricSpace:
    """Product space on X x Y with d((x,y),(x',y')) = d_X(x,x') + d_Y(y,y')."""
    if Y.n == 1:
        return X
    if X.n == 1:
        return Y
    if X.kind != "plain" or Y.kind != "plain":
        raise UnsupportedOperationError(
            "l1 product needs rational distance values in both factors "
            "(sums of distinct square roots have no exact representation)"
        )
    n = X.n * Y.n
    if X._int and Y._int:
        kx = np.repeat(np.arange(X.n), Y.n)
        ky = np.tile(np.arange(Y.n), X.n)
        keys = X._K[np.ix_(kx, kx)] + Y._K[np.ix_(ky, ky)]
    else:
        pairs = [(i, j) for i in range(X.n) for j in range(Y.n)]
        keys = tuple(
            tuple(Fraction(X.key(a, c)) + Fraction(Y.key(b, d)) for (c, d) in pairs)
            for (a, b) in pairs
        )
    coords = None
    if X.coords is not None and Y.coords is not None:
        coords = tuple(cx + cy for cx in X.coords for cy in Y.coords)
    meta = {"kind": "product", "left": X.meta, "right": Y.meta}
    return MetricSpace(n, "plain", keys, coords=coords, window=None, meta=meta)
