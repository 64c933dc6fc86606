"""Deterministic fixture generators: cycles, grids, windows, trees,
hybrid graphs, the small worked point sets and digital-curve corpora.

Every generator emits a plain JSON document (space or curve), so
fixtures are reproducible and serializable; parameters are echoed by
the CLI. Randomized corpora take explicit seeds.
"""

from __future__ import annotations

import random
from typing import Optional

from .digital import DigitalCurve, contains_unit_square, is_simple_curve
from .spaces import DocumentFormatError


def _points_doc(points, metric="euclidean", margin=None, rim=None):
    doc = {"kind": "points", "coords": "integer", "metric": metric, "points": [list(p) for p in points]}
    if margin is not None:
        doc["window"] = {"margin": margin}
        if rim is not None:
            doc["window"]["rim"] = sorted(rim)
    return doc


def _graph_doc(n, edges, margin=None, rim=None):
    doc = {"kind": "graph", "n": n, "edges": sorted([min(e), max(e)] for e in edges)}
    if margin is not None:
        if rim is None:
            raise DocumentFormatError("graph window needs an explicit rim")
        doc["window"] = {"margin": margin, "rim": sorted(rim)}
    return doc


def cycle_graph(n: int) -> dict:
    return _graph_doc(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> dict:
    return _graph_doc(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> dict:
    return _graph_doc(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def z_window(r: int, margin: int = 1) -> dict:
    return _points_doc([(x,) for x in range(-r, r + 1)], margin=margin)


def grid2d(side: int, metric: str = "euclidean", margin: Optional[int] = 1) -> dict:
    pts = [(x, y) for x in range(side) for y in range(side)]
    if metric in ("euclidean", "l1"):
        return _points_doc(pts, metric=metric, margin=margin)
    if metric == "graph":
        idx = {p: i for i, p in enumerate(pts)}
        edges = []
        for (x, y) in pts:
            if (x + 1, y) in idx:
                edges.append((idx[(x, y)], idx[(x + 1, y)]))
            if (x, y + 1) in idx:
                edges.append((idx[(x, y)], idx[(x, y + 1)]))
        rim = [idx[p] for p in pts if p[0] in (0, side - 1) or p[1] in (0, side - 1)]
        return _graph_doc(len(pts), edges, margin=margin, rim=rim)
    raise DocumentFormatError(f"unknown grid metric {metric!r}")


def punctured_grid(r: int, margin: Optional[int] = 1) -> dict:
    pts = [(x, y) for x in range(-r, r + 1) for y in range(-r, r + 1) if (x, y) != (0, 0)]
    return _points_doc(pts, margin=margin)


def _tree_layers(degree: int, depth: int):
    edges = []
    layers = [[0]]
    nxt = 1
    for d in range(depth):
        layer = []
        for v in layers[-1]:
            kids = degree if d == 0 else degree - 1
            for _ in range(kids):
                edges.append((v, nxt))
                layer.append(nxt)
                nxt += 1
        layers.append(layer)
    return nxt, edges, layers


def tree_window(degree: int, depth: int, margin: int = 1) -> dict:
    n, edges, layers = _tree_layers(degree, depth)
    return _graph_doc(n, edges, margin=margin, rim=layers[-1])


def tree_plus_z(degree: int, depth: int, limb: int, margin: int = 1) -> dict:
    """Regular-tree window with a line of `limb` extra vertices hung on the root."""
    n, edges, layers = _tree_layers(degree, depth)
    prev = 0
    limb_ids = []
    for t in range(limb):
        edges.append((prev, n + t))
        limb_ids.append(n + t)
        prev = n + t
    rim = list(layers[-1]) + [limb_ids[-1]] if limb_ids else list(layers[-1])
    return _graph_doc(n + limb, edges, margin=margin, rim=rim)


def five_point_space() -> dict:
    return _points_doc([(-1, 1), (-1, 0), (0, 0), (1, 1), (1, -1)])


def eight_point_ring() -> dict:
    return _points_doc([(-1, 1), (0, 1), (1, 1), (-1, 0), (1, 0), (-1, -1), (0, -1), (1, -1)])


def unit_square_points() -> dict:
    return _points_doc([(0, 0), (1, 0), (1, 1), (0, 1)])


def line3() -> dict:
    return _points_doc([(0,), (1,), (2,)])


def triangle_space() -> dict:
    return {"kind": "matrix", "d": [[0, 1, 1], [1, 0, 1], [1, 1, 0]]}


def nested_line(n_max: int) -> dict:
    """(0,1) plus (n,0) for 2 <= n <= n_max, Euclidean."""
    return _points_doc([(0, 1)] + [(n, 0) for n in range(2, n_max + 1)])


def integer_ray(n_max: int) -> dict:
    """{0} plus {2..n_max} on the line (the symbolic image of nested_line)."""
    return _points_doc([(0,)] + [(n,) for n in range(2, n_max + 1)])


def double_line(n: int) -> dict:
    """Two parallel unit-spaced rows of length n."""
    return _points_doc([(x, 0) for x in range(n)] + [(x, 1) for x in range(n)])


def single_line(n: int) -> dict:
    return _points_doc([(x, 0) for x in range(n)])


def random_connected_graph(n: int, seed: int = 0, extra: Optional[int] = None) -> dict:
    rng = random.Random(seed)
    edges = set()
    for v in range(1, n):
        u = rng.randrange(v)
        edges.add((u, v))
    if extra is None:
        extra = rng.randrange(0, max(1, n))
    for _ in range(extra):
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return _graph_doc(n, sorted(edges))


# -- digital curves ----------------------------------------------------


def _interpolate(verts):
    """Lattice points along the closed polyline through the vertex list."""
    pts = []
    m = len(verts)
    for t in range(m):
        (x0, y0), (x1, y1) = verts[t], verts[(t + 1) % m]
        if x0 != x1 and y0 != y1:
            raise DocumentFormatError("polyline edges must be axis-aligned")
        sx = (x1 > x0) - (x1 < x0)
        sy = (y1 > y0) - (y1 < y0)
        cx, cy = x0, y0
        while (cx, cy) != (x1, y1):
            pts.append((cx, cy))
            cx += sx
            cy += sy
    pts.append(pts[0])
    return tuple(pts)


def rectangle_curve(w: int, h: int) -> dict:
    """Perimeter ring of a w x h block of lattice points (w, h >= 3)."""
    if w < 3 or h < 3:
        raise DocumentFormatError("rectangle ring needs w, h >= 3")
    verts = [(0, 0), (w - 1, 0), (w - 1, h - 1), (0, h - 1)]
    return {"kind": "digital_curve", "points": [list(p) for p in _interpolate(verts)]}


def figure8_curve(a: int = 2, b: int = 1) -> dict:
    """Two lobes pinched at a diagonal contact; never simple, splits the
    grid into three components. a=2, b=1 is the canonical 12-step shape."""
    arc = [(0, -y) for y in range(0, b + 1)]
    arc += [(x, -b) for x in range(1, a + 1)]
    arc += [(a, y) for y in range(-b + 1, 2)]
    arc += [(x, 1) for x in range(a - 1, 0, -1)]
    rot = [(1 - x, 1 - y) for (x, y) in arc]
    pts = arc + rot[1:]  # rot starts where arc ends and returns to the start
    return {"kind": "digital_curve", "points": [list(p) for p in pts]}


def _l_shape_curve(w, h, a, b):
    verts = [(0, 0), (w - 1, 0), (w - 1, h - 1 - b), (w - 1 - a, h - 1 - b), (w - 1 - a, h - 1), (0, h - 1)]
    return _interpolate(verts)


def _staircase_curve(rng, max_side):
    """Skyline polygon: bottom edge plus a stepped top profile."""
    w = rng.randrange(5, max_side + 1)
    k = min(rng.randrange(1, 3), w - 2)
    xs = sorted(rng.sample(range(1, w - 1), k))
    heights = [rng.randrange(3, max_side + 1) for _ in range(k + 1)]
    verts = [(0, 0), (w - 1, 0), (w - 1, heights[-1] - 1)]
    for t in range(k, 0, -1):
        verts.append((xs[t - 1], heights[t] - 1))
        verts.append((xs[t - 1], heights[t - 1] - 1))
    verts.append((0, heights[0] - 1))
    clean = []
    for v in verts:
        if not clean or clean[-1] != v:
            clean.append(v)
    if clean[0] == clean[-1]:
        clean.pop()
    return _interpolate(clean)


def simple_curve_corpus(count: int, seed: int = 0, max_side: int = 12):
    """Deterministic list of `count` verified simple square-free ring curves
    inside a max_side x max_side box: rectangles, notched rectangles and
    random staircases, filtered through the simplicity checks."""
    rng = random.Random(seed)
    out = []
    seen = set()

    def consider(pts):
        if len(out) >= count:
            return
        try:
            curve = DigitalCurve(pts).canonical()
        except Exception:
            return
        cyc = curve.cyclic_points()
        xs = [p[0] for p in cyc]
        ys = [p[1] for p in cyc]
        if max(xs) - min(xs) + 1 > max_side or max(ys) - min(ys) + 1 > max_side:
            return
        key = frozenset(cyc)
        if key in seen or len(cyc) < 8:
            return
        ok, _ = is_simple_curve(curve)
        if not ok:
            return
        has, _ = contains_unit_square(curve)
        if has:
            return
        seen.add(key)
        out.append(curve)

    for w in range(3, max_side + 1):
        for h in range(3, max_side + 1):
            consider(_interpolate([(0, 0), (w - 1, 0), (w - 1, h - 1), (0, h - 1)]))
    attempts = 0
    while len(out) < count and attempts < 100 * count:
        attempts += 1
        shape = rng.choice(["L", "stair"])
        if shape == "L":
            w = rng.randrange(5, max_side + 1)
            h = rng.randrange(5, max_side + 1)
            a = rng.randrange(2, w - 2)
            b = rng.randrange(2, h - 2)
            consider(_l_shape_curve(w, h, a, b))
        else:
            consider(_staircase_curve(rng, max_side))
    if len(out) < count:
        raise DocumentFormatError(f"could only generate {len(out)} of {count} curves")
    return out


_FIXTURES = {
    "cycle": lambda p: cycle_graph(int(p.get("n", 4))),
    "path": lambda p: path_graph(int(p.get("n", 3))),
    "complete": lambda p: complete_graph(int(p.get("n", 4))),
    "z_window": lambda p: z_window(int(p.get("r", 20)), int(p.get("margin", 1))),
    "grid2d": lambda p: grid2d(int(p.get("side", 7)), p.get("metric", "euclidean"), int(p.get("margin", 1))),
    "punctured_grid": lambda p: punctured_grid(int(p.get("r", 3)), int(p.get("margin", 1))),
    "tree": lambda p: tree_window(int(p.get("degree", 3)), int(p.get("depth", 4)), int(p.get("margin", 1))),
    "tree_plus_z": lambda p: tree_plus_z(
        int(p.get("degree", 3)), int(p.get("depth", 4)), int(p.get("limb", 20)), int(p.get("margin", 1))
    ),
    "five_point": lambda p: five_point_space(),
    "eight_point_ring": lambda p: eight_point_ring(),
    "unit_square": lambda p: unit_square_points(),
    "line3": lambda p: line3(),
    "triangle": lambda p: triangle_space(),
    "nested_line": lambda p: nested_line(int(p.get("n", 6))),
    "integer_ray": lambda p: integer_ray(int(p.get("n", 6))),
    "double_line": lambda p: double_line(int(p.get("n", 6))),
    "single_line": lambda p: single_line(int(p.get("n", 6))),
    "random_connected_graph": lambda p: random_connected_graph(
        int(p.get("n", 8)), int(p.get("seed", 0)), int(p["extra"]) if "extra" in p else None
    ),
    "rectangle_curve": lambda p: rectangle_curve(int(p.get("w", 3)), int(p.get("h", 3))),
    "figure8_curve": lambda p: figure8_curve(int(p.get("a", 2)), int(p.get("b", 1))),
    "random_simple_curve": lambda p: {
        "kind": "digital_curve",
        "points": [
            list(q)
            for q in simple_curve_corpus(
                int(p.get("index", 0)) + 1, int(p.get("seed", 0)), int(p.get("max_side", 12))
            )[int(p.get("index", 0))].points
        ],
    },
}


def fixture_names():
    return sorted(_FIXTURES)


def generate_fixture(name: str, params: Optional[dict] = None) -> dict:
    if name not in _FIXTURES:
        raise DocumentFormatError(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}")
    return _FIXTURES[name](params or {})
