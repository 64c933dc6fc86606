"""Continuous paths, circuits, homotopy matrices and bounded contraction search.

A step is legal between points that lie in each other's discrete
1-neighborhood (staying put is always legal). A homotopy matrix relates
two circuits: every row and every column must be a continuous path and
the two end columns are pinned.

The contraction search explores row rewrites: one entry or a contiguous
block of entries moves simultaneously, each entry staying inside the
step relation with its old value (column continuity) and its new row
neighbors. Single-entry moves alone do not suffice at fixed width (the
unit square already needs a 2-entry move), so block moves are on by
default with a tunable bound. A missing certificate is never evidence
of non-contractibility; only the winding oracles certify that.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from . import npp as _npp
from .spaces import MetricSpace, SpaceError, _check_ids


class HomotopyError(Exception):
    pass


@dataclass(frozen=True)
class Circuit:
    points: tuple

    @property
    def base(self) -> int:
        return self.points[0]

    def __len__(self):
        return len(self.points)


def make_circuit(space: MetricSpace, points: Sequence[int]) -> Circuit:
    pts = tuple(int(p) for p in points)
    if not pts:
        raise HomotopyError("empty circuit")
    if pts[0] != pts[-1]:
        raise HomotopyError(f"circuit must close: {pts[0]} != {pts[-1]}")
    ok, at = is_continuous_path(space, pts)
    if not ok:
        raise HomotopyError(f"not a continuous path at index {at}")
    return Circuit(pts)


def constant_circuit(base: int) -> Circuit:
    return Circuit((int(base),))


def is_continuous_path(space: MetricSpace, seq: Sequence[int]):
    """True iff consecutive points are mutually in each other's dN1.

    Returns (ok, first_violating_index).
    """
    pts = [int(p) for p in seq]
    if not pts:
        raise SpaceError("empty sequence")
    _check_ids(space, pts)
    for i in range(1, len(pts)):
        a, b = pts[i - 1], pts[i]
        if a == b:
            continue
        if b not in space.dn1(a) or a not in space.dn1(b):
            return False, i
    return True, None


def path_components(space: MetricSpace):
    """Partition of the point set under the step relation's transitive closure."""
    return space.components()


def _collapse(points: Iterable[int]) -> tuple:
    out = []
    for p in points:
        if not out or out[-1] != p:
            out.append(p)
    return tuple(out)


def concat(c1: Circuit, c2: Circuit) -> Circuit:
    """Concatenation with adjacent duplicates collapsed (xx = x)."""
    if c1.base != c2.base:
        raise HomotopyError(f"base mismatch: {c1.base} != {c2.base}")
    return Circuit(_collapse(c1.points + c2.points))


def reverse_circuit(c: Circuit) -> Circuit:
    return Circuit(tuple(reversed(c.points)))


def rebase_circuit(c: Circuit, path: Sequence[int]) -> Circuit:
    """Conjugate a circuit along a connecting path: new base = path end."""
    path = tuple(int(p) for p in path)
    if path[0] != c.base:
        raise HomotopyError("path must start at the circuit base")
    back = tuple(reversed(path))
    return Circuit(_collapse(back[:-1] + c.points + path))


def validate_homotopy_matrix(space: MetricSpace, rows: Sequence[Sequence[int]]):
    """Checks rectangularity, row/column continuity and pinned end columns.

    Returns (ok, first_violating_(row, col)).
    """
    rows = [tuple(int(p) for p in r) for r in rows]
    if not rows:
        raise HomotopyError("empty matrix")
    w = len(rows[0])
    if any(len(r) != w for r in rows):
        raise HomotopyError("ragged matrix")
    first, last = rows[0][0], rows[0][-1]
    for ri, r in enumerate(rows):
        if r[0] != first:
            return False, (ri, 0)
        if r[-1] != last:
            return False, (ri, w - 1)
        ok, at = is_continuous_path(space, r)
        if not ok:
            return False, (ri, at)
    for ci in range(w):
        col = [r[ci] for r in rows]
        ok, at = is_continuous_path(space, col)
        if not ok:
            return False, (at, ci)
    return True, None


# -- rewrite moves ---------------------------------------------------


def _step_sets(space: MetricSpace):
    """step_or_stay[i] = {i} ∪ mutual neighbors of i, as sorted tuples."""
    return tuple(
        tuple(sorted(set(adj) | {i})) for i, adj in enumerate(space.mutual_adjacency())
    )


def legal_row_moves(space: MetricSpace, row: Sequence[int], max_block: int = 3):
    """All rows reachable by rewriting one contiguous interior block.

    Both block endpoints must actually change (anything else factors
    through a shorter block). Each rewritten entry stays step-adjacent to
    its old value, its chosen left neighbor and the fixed right neighbor.
    """
    row = tuple(row)
    w = len(row)
    M = _step_sets(space)
    out = []
    for blen in range(1, max_block + 1):
        for start in range(1, w - blen):
            right_fixed = row[start + blen]

            def assign(pos, prefix):
                left = row[start - 1] if pos == start else prefix[-1]
                left_set = set(M[left])
                last = pos == start + blen - 1
                for z in M[row[pos]]:
                    if z not in left_set:
                        continue
                    if pos == start and z == row[start]:
                        continue
                    if last:
                        if z == row[pos]:
                            continue
                        if right_fixed not in M[z]:
                            continue
                        out.append(row[:start] + tuple(prefix) + (z,) + row[start + blen:])
                    else:
                        assign(pos + 1, prefix + [z])

            if blen == 1:
                # single entry: changed, adjacent to both fixed neighbors and old value
                left_set = set(M[row[start - 1]])
                for z in M[row[start]]:
                    if z != row[start] and z in left_set and right_fixed in M[z]:
                        out.append(row[:start] + (z,) + row[start + 1:])
            else:
                assign(start, [])
    return out


def _paddings(points: tuple, width: int, cap: int = 512):
    """Distinct width-`width` rows obtained by duplicating entries (xx = x)."""
    extra = width - len(points)
    if extra < 0:
        return []
    if extra == 0:
        return [points]
    results = set()

    def distribute(i, remaining, acc):
        if len(results) >= cap:
            return
        if i == len(points):
            if remaining == 0:
                results.add(tuple(acc))
            return
        for dup in range(remaining + 1):
            distribute(i + 1, remaining - dup, acc + [points[i]] * (dup + 1))

    distribute(0, extra, [])
    if len(results) >= cap:
        # fall back to canonical end padding only
        return [points + (points[-1],) * extra]
    return sorted(results)


@dataclass
class NullHomotopyResult:
    status: str  # "certificate" | "exhausted" | "bounds-exceeded"
    certificate: Optional[list] = None
    width: Optional[int] = None
    states: int = 0
    expansions: int = 0
    widths_tried: tuple = ()

    def found(self) -> bool:
        return self.status == "certificate"


def null_homotopy_search(
    space: MetricSpace,
    c: Circuit,
    max_width: int,
    max_states: int,
    max_block: int = 3,
) -> NullHomotopyResult:
    """Bounded best-first search for a homotopy matrix ending at the constant circuit.

    Widths are tried in increasing order; the first row of the returned
    matrix is the (padded) input and the last row is constant at the base.
    """
    pts = c.points
    base = c.base
    _check_ids(space, pts)
    ok, at = is_continuous_path(space, pts)
    if not ok:
        raise HomotopyError(f"input circuit not continuous at {at}")

    # hop distance to the base over the step relation, for the search heuristic
    from collections import deque

    hop = {base: 0}
    dq = deque([base])
    adj = space.mutual_adjacency()
    while dq:
        u = dq.popleft()
        for v in adj[u]:
            if v not in hop:
                hop[v] = hop[u] + 1
                dq.append(v)
    if any(p not in hop for p in pts):
        raise HomotopyError("circuit leaves the base point's path component")

    states = 0
    expansions = 0
    capped = False
    widths = []
    start_width = max(len(pts), 2) if len(pts) > 1 else 1

    if all(p == base for p in pts):
        return NullHomotopyResult("certificate", [list(pts)], width=len(pts), states=1)

    for width in range(start_width, max_width + 1):
        widths.append(width)
        target = (base,) * width
        heap = []
        visited = {}
        counter = 0
        for srow in _paddings(pts, width):
            h = sum(hop[p] for p in srow)
            heap.append((h, counter, srow))
            visited[srow] = None
            counter += 1
        heapq.heapify(heap)
        found = None
        while heap:
            if states >= max_states:
                capped = True
                break
            _, _, row = heapq.heappop(heap)
            expansions += 1
            if row == target:
                found = row
                break
            for nxt in legal_row_moves(space, row, max_block=max_block):
                if nxt in visited:
                    continue
                visited[nxt] = row
                states += 1
                counter += 1
                h = sum(hop[p] for p in nxt)
                heapq.heappush(heap, (h, counter, nxt))
                if nxt == target:
                    break
        if target in visited:
            rows = []
            cur = target
            while cur is not None:
                rows.append(list(cur))
                cur = visited[cur]
            rows.reverse()
            ok, viol = validate_homotopy_matrix(space, rows)
            if not ok:
                raise HomotopyError(f"internal: certificate failed validation at {viol}")
            return NullHomotopyResult(
                "certificate", rows, width=width, states=states, expansions=expansions,
                widths_tried=tuple(widths),
            )
        if capped:
            break
    status = "bounds-exceeded" if capped else "exhausted"
    return NullHomotopyResult(status, None, states=states, expansions=expansions, widths_tried=tuple(widths))


@dataclass
class HomotopyComparison:
    status: str  # "certificate" | "exhausted" | "bounds-exceeded"
    route: Optional[str] = None  # "composite-loop" | "direct"
    result: Optional[NullHomotopyResult] = None
    direct_rows: Optional[list] = None


def circuits_homotopic(
    space: MetricSpace,
    c1: Circuit,
    c2: Circuit,
    max_width: int,
    max_states: int,
    max_block: int = 3,
) -> HomotopyComparison:
    """Search for a homotopy between two circuits with the same base.

    Tries the loop-composition reduction (contract c1 . reverse(c2)) and a
    direct two-row search; either certificate is accepted.
    """
    if c1.base != c2.base:
        raise HomotopyError("base mismatch")
    if c1.points == c2.points:
        rows = [list(c1.points)]
        return HomotopyComparison("certificate", route="direct", direct_rows=rows)

    loop = concat(c1, reverse_circuit(c2))
    res = null_homotopy_search(space, loop, max_width=max_width, max_states=max_states, max_block=max_block)
    if res.found():
        return HomotopyComparison("certificate", route="composite-loop", result=res)

    # direct search: drive end-padded c1 toward end-padded c2, sharing one budget
    width = max(len(c1), len(c2), 2)
    capped = res.status == "bounds-exceeded"
    remaining = max_states
    for w in range(width, max_width + 1):
        if remaining <= 0:
            capped = True
            break
        s_row = c1.points + (c1.base,) * (w - len(c1))
        t_row = c2.points + (c2.base,) * (w - len(c2))
        rows, used, hit_cap = _row_to_row_search(space, s_row, t_row, remaining, max_block)
        remaining -= used
        if rows is not None:
            return HomotopyComparison("certificate", route="direct", direct_rows=rows)
        capped = capped or hit_cap
    return HomotopyComparison("bounds-exceeded" if capped else "exhausted", result=res)


def _hops_from(space, source):
    from collections import deque

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


def _row_to_row_search(space, start, target, max_states, max_block):
    if start == target:
        return [list(start)], 0, False
    hops = {t: _hops_from(space, t) for t in set(target)}
    heap = [(0, 0, start)]
    visited = {start: None}
    counter = 0
    states = 0
    while heap:
        if states >= max_states:
            return None, states, True
        _, _, row = heapq.heappop(heap)
        for nxt in legal_row_moves(space, row, max_block=max_block):
            if nxt in visited:
                continue
            visited[nxt] = row
            states += 1
            counter += 1
            h = sum(hops[t].get(a, space.n) for a, t in zip(nxt, target))
            heapq.heappush(heap, (h, counter, nxt))
            if nxt == target:
                rows = []
                cur = nxt
                while cur is not None:
                    rows.append(list(cur))
                    cur = visited[cur]
                rows.reverse()
                ok, viol = validate_homotopy_matrix(space, rows)
                if not ok:
                    raise HomotopyError(f"internal: certificate failed validation at {viol}")
                return rows, states, False
    return None, states, False


# -- winding oracles -------------------------------------------------


def _cycle_order(space: MetricSpace):
    """Vertex order around a cycle space (every point has exactly 2 step neighbors)."""
    adj = space.mutual_adjacency()
    if space.n < 3 or any(len(a) != 2 for a in adj):
        return None
    order = [0, adj[0][0]]
    while True:
        prev, cur = order[-2], order[-1]
        nxts = [v for v in adj[cur] if v != prev]
        if len(nxts) != 1:
            return None
        if nxts[0] == 0:
            break
        order.append(nxts[0])
    if len(order) != space.n:
        return None
    return order


def winding_number(space: MetricSpace, c: Circuit, puncture=None) -> int:
    """Integer winding of a circuit: around a cycle space, or around a
    punctured grid point. This is the independent oracle certifying that a
    circuit is not null-homotopic; the value is invariant under legal row
    rewrites (property-tested), so a nonzero winding rules out a certificate.
    """
    if puncture is None:
        order = _cycle_order(space)
        if order is None or space.n < 5:
            raise HomotopyError("winding over the cycle structure needs a cycle space with >= 5 points")
        pos = {v: i for i, v in enumerate(order)}
        n = space.n
        total = 0
        for a, b in zip(c.points, c.points[1:]):
            if a == b:
                continue
            d = (pos[b] - pos[a]) % n
            if d == 1:
                total += 1
            elif d == n - 1:
                total -= 1
            else:
                raise HomotopyError("circuit step is not a unit step on the cycle")
        if total % n != 0:
            raise HomotopyError("open lift: not a circuit")
        return total // n

    if space.coords is None:
        raise HomotopyError("puncture winding needs coordinates")
    px, py = puncture
    coords = space.coords
    if any(tuple(cc) == (px, py) for cc in coords):
        raise HomotopyError("puncture is a point of the space")
    total = 0
    for a, b in zip(c.points, c.points[1:]):
        if a == b:
            continue
        (ax, ay), (bx, by) = coords[a], coords[b]
        dx, dy = bx - ax, by - ay
        if abs(dx) + abs(dy) != 1:
            raise HomotopyError("circuit step is not an axis unit step")
        # crossing count of the ray {y = py + eps, x > px}
        if dx == 0 and ax > px:
            if ay == py and by == py + 1:
                total += 1
            elif ay == py + 1 and by == py:
                total -= 1
    return total


def map_circuit(f: "_npp.PointMap", c: Circuit) -> Circuit:
    """Image of a circuit under a verified nearest-point-preserving map."""
    ok, witness = _npp.is_npp_function(f)
    if not ok:
        raise HomotopyError(f"map is not nearest-point-preserving (witness {witness})")
    image = tuple(f.table[p] for p in c.points)
    return make_circuit(f.codomain, image)
