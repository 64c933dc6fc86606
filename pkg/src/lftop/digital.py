"""Digital Jordan curve machinery on the integer grid.

Everything here works on raw (x, y) integer pairs: circuits move by axis
unit steps (stays allowed, stripped before analysis). Simplicity is the
strong discrete notion: interior points pairwise distinct AND every
diagonal contact between curve points happens exactly two steps apart
(cyclically) through a shared axis neighbor. Simple curves without unit
squares separate the grid into exactly two 4-connected components, and
the curve can be rebuilt from the extremal points of its interior.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class DigitalCurveError(Exception):
    pass


class NotSimpleCurveError(DigitalCurveError):
    def __init__(self, witness):
        super().__init__(f"curve is not simple (witness {witness})")
        self.witness = witness


class UnitSquareError(DigitalCurveError):
    def __init__(self, square):
        super().__init__(f"curve contains the unit square {sorted(square)}")
        self.square = square


class CompletionPatternError(DigitalCurveError):
    def __init__(self, point, context):
        super().__init__(f"extremal point {point} matches no completion pattern: {context}")
        self.point = point
        self.context = context


class JordanCheckError(DigitalCurveError):
    pass


def grid_boundaries(pt):
    """The 4 axis neighbors and the 4 diagonal neighbors of a grid point."""
    x, y = pt
    axis = frozenset([(x, y + 1), (x, y - 1), (x - 1, y), (x + 1, y)])
    diag = frozenset([(x + 1, y + 1), (x - 1, y + 1), (x - 1, y - 1), (x + 1, y - 1)])
    return axis, diag


@dataclass(frozen=True)
class DigitalCurve:
    """A closed lattice circuit: first point = last point, axis-unit steps."""

    points: tuple

    def __post_init__(self):
        pts = tuple((int(p[0]), int(p[1])) for p in self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise DigitalCurveError("empty curve")
        if pts[0] != pts[-1]:
            raise DigitalCurveError("curve must close")
        for a, b in zip(pts, pts[1:]):
            if abs(a[0] - b[0]) + abs(a[1] - b[1]) > 1:
                raise DigitalCurveError(f"illegal step {a} -> {b}")

    def canonical(self) -> "DigitalCurve":
        """Stays removed; the circuit structure is unchanged."""
        out = []
        for p in self.points:
            if not out or out[-1] != p:
                out.append(p)
        if len(out) > 1 and out[0] == out[-1]:
            pass
        elif len(out) >= 1 and out[0] != out[-1]:
            out.append(out[0])
        return DigitalCurve(tuple(out))

    def cyclic_points(self) -> tuple:
        """The circuit as a cyclic list (closing duplicate dropped)."""
        pts = self.canonical().points
        return pts[:-1] if len(pts) > 1 else pts

    def point_set(self) -> frozenset:
        return frozenset(self.cyclic_points())

    def is_constant(self) -> bool:
        return len(self.point_set()) == 1


def is_simple_curve(curve: DigitalCurve):
    """Distinct points plus the two-steps-apart rule for diagonal contacts.

    Returns (ok, witness); witness = (p_i, p_j, i, j) for the first pair of
    cyclic positions violating either condition.
    """
    pts = curve.cyclic_points()
    n = len(pts)
    if n == 1:
        return True, None
    seen = {}
    for i, p in enumerate(pts):
        if p in seen:
            return False, (p, p, seen[p], i)
        seen[p] = i
    for i in range(n):
        axis_i, diag_i = grid_boundaries(pts[i])
        for j in range(i + 1, n):
            if pts[j] not in diag_i:
                continue
            gap_fwd = (j - i) % n
            gap_bwd = (i - j) % n
            if gap_fwd == 2:
                mid = pts[(i + 1) % n]
            elif gap_bwd == 2:
                mid = pts[(j + 1) % n]
            else:
                return False, (pts[i], pts[j], i, j)
            if mid not in grid_boundaries(pts[i])[0] or mid not in grid_boundaries(pts[j])[0]:
                return False, (pts[i], pts[j], i, j)
    return True, None


def contains_unit_square(curve: DigitalCurve):
    """Scans for four curve points forming a lattice unit square."""
    pts = curve.point_set()
    for (x, y) in sorted(pts):
        square = ((x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1))
        if all(q in pts for q in square):
            return True, square
    return False, None


def reduce_unit_square(curve: DigitalCurve) -> Optional[DigitalCurve]:
    """Opt-in helper: flip one corner of a detected unit square by a single
    elementary rewrite and return the new curve, or None if no flip applies.
    The choice of reduction is not canonical, so this is never automatic."""
    has, _ = contains_unit_square(curve)
    if not has:
        return None
    pts = curve.cyclic_points()
    n = len(pts)
    pset = curve.point_set()
    for i in range(n):
        a, b, c = pts[(i - 1) % n], pts[i], pts[(i + 1) % n]
        if a == c:
            continue
        q = (a[0] + c[0] - b[0], a[1] + c[1] - b[1])
        if q == b or q not in pset:
            continue
        if {a, b, c, q} != {(min(a[0], c[0]), min(a[1], c[1])),
                            (max(a[0], c[0]), min(a[1], c[1])),
                            (min(a[0], c[0]), max(a[1], c[1])),
                            (max(a[0], c[0]), max(a[1], c[1]))}:
            continue
        new = list(pts)
        new[i] = q
        cand = DigitalCurve(tuple(new) + (new[0],))
        cand = cand.canonical()
        still, _ = contains_unit_square(cand)
        if not still:
            return cand
    return None


@dataclass(frozen=True)
class RayHits:
    x_plus: Optional[tuple]
    x_minus: Optional[tuple]
    y_plus: Optional[tuple]
    y_minus: Optional[tuple]

    @property
    def quasi_internal(self) -> bool:
        return None not in (self.x_plus, self.x_minus, self.y_plus, self.y_minus)

    def hits(self):
        return [h for h in (self.x_plus, self.x_minus, self.y_plus, self.y_minus) if h is not None]


def extremal_rays(curve: DigitalCurve, pt) -> RayHits:
    """First curve hit along each of the four axis rays from pt."""
    pts = curve.point_set()
    x, y = int(pt[0]), int(pt[1])
    if (x, y) in pts:
        raise DigitalCurveError(f"{(x, y)} lies on the curve")
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    xlo, xhi, ylo, yhi = min(xs), max(xs), min(ys), max(ys)

    def walk(dx, dy):
        if dx:
            if not (ylo <= y <= yhi):
                return None
            rng = range(max(x + 1, xlo), xhi + 1) if dx > 0 else range(min(x - 1, xhi), xlo - 1, -1)
            for cx in rng:
                if (cx, y) in pts:
                    return (cx, y)
            return None
        if not (xlo <= x <= xhi):
            return None
        rng = range(max(y + 1, ylo), yhi + 1) if dy > 0 else range(min(y - 1, yhi), ylo - 1, -1)
        for cy in rng:
            if (x, cy) in pts:
                return (x, cy)
        return None

    return RayHits(walk(1, 0), walk(-1, 0), walk(0, 1), walk(0, -1))


@dataclass
class ClosureResult:
    status: str  # "internal" | "escaped"
    points: frozenset
    extremal: frozenset
    failure_at: Optional[tuple] = None

    def ok(self) -> bool:
        return self.status == "internal"


def reconstruction_closure(curve: DigitalCurve, seed) -> ClosureResult:
    """Least set containing the seed, closed under filling the open row and
    column segments between its members' ray hits; fails as soon as a member
    is not quasi-internal (some ray escapes)."""
    seed = (int(seed[0]), int(seed[1]))
    closed = set()
    extremal = set()
    pending = {seed}
    while pending:
        p = min(pending)
        pending.discard(p)
        if p in closed:
            continue
        hits = extremal_rays(curve, p)
        if not hits.quasi_internal:
            return ClosureResult("escaped", frozenset(closed), frozenset(extremal), failure_at=p)
        closed.add(p)
        extremal.update(hits.hits())
        x, y = p
        for nx in range(hits.x_minus[0] + 1, hits.x_plus[0]):
            if (nx, y) not in closed:
                pending.add((nx, y))
        for ny in range(hits.y_minus[1] + 1, hits.y_plus[1]):
            if (x, ny) not in closed:
                pending.add((x, ny))
    return ClosureResult("internal", frozenset(closed), frozenset(extremal))


def gamma_completion(curve: DigitalCurve, C: Iterable[tuple]) -> frozenset:
    """Rebuild the curve from an internal set: its extremal points plus, for
    each diagonal pair of extremal points, the shared axis point away from C.

    Patterns per extremal point e (E = extremal set): two axis partners in E
    (nothing to add); one axis + one diagonal partner (one connector); no
    axis + two diagonal partners (two connectors). Anything else is surfaced,
    never guessed.
    """
    C = {(int(p[0]), int(p[1])) for p in C}
    if not C:
        return frozenset()
    extremal = set()
    for p in sorted(C):
        hits = extremal_rays(curve, p)
        if not hits.quasi_internal:
            raise DigitalCurveError(f"{p} is not quasi-internal; C is not internal")
        extremal.update(hits.hits())
    out = set(extremal)
    for e in sorted(extremal):
        axis, diag = grid_boundaries(e)
        a = sorted(axis & extremal)
        # a diagonal partner already linked through an extremal axis point
        # between them needs no connector
        unmediated = []
        for e2 in sorted(diag & extremal):
            shared = grid_boundaries(e)[0] & grid_boundaries(e2)[0]
            if shared & extremal:
                continue
            unmediated.append((e2, shared))
        pattern = (len(a), len(unmediated))
        if pattern not in ((2, 0), (1, 1), (0, 2)):
            raise CompletionPatternError(e, {"axis": a, "unmediated_diagonal": [u[0] for u in unmediated]})
        for e2, shared in unmediated:
            cand = sorted(shared - C)
            if len(cand) != 1:
                raise CompletionPatternError(e, {"partner": e2, "candidates": cand})
            out.add(cand[0])
    return frozenset(out)


def box_components(curve: DigitalCurve, margin: int = 1):
    """4-connected components of the margined bounding box minus the curve.

    Pure diagnostic: no simplicity precondition.
    """
    pts = curve.point_set()
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    xlo, xhi = min(xs) - margin, max(xs) + margin
    ylo, yhi = min(ys) - margin, max(ys) + margin
    seen = set()
    comps = []
    for x in range(xlo, xhi + 1):
        for y in range(ylo, yhi + 1):
            p = (x, y)
            if p in pts or p in seen:
                continue
            comp = []
            stack = [p]
            seen.add(p)
            while stack:
                cx, cy = stack.pop()
                comp.append((cx, cy))
                for q in ((cx + 1, cy), (cx - 1, cy), (cx, cy + 1), (cx, cy - 1)):
                    if xlo <= q[0] <= xhi and ylo <= q[1] <= yhi and q not in pts and q not in seen:
                        seen.add(q)
                        stack.append(q)
            comps.append(frozenset(comp))
    comps.sort(key=lambda c: (len(c), min(c)))
    return len(comps), comps, (xlo, xhi, ylo, yhi)


@dataclass
class JordanDecomposition:
    interior: frozenset
    exterior: frozenset
    box: tuple  # (xlo, xhi, ylo, yhi)
    margin: int
    component_count: int
    canonical_seed: tuple
    two_components: bool
    interior_in_rect: bool
    reconstruction_ok: bool
    exterior_escapes: bool

    def as_dict(self) -> dict:
        return {
            "interior": sorted(map(list, self.interior)),
            "interior_size": len(self.interior),
            "exterior_size": len(self.exterior),
            "box": list(self.box),
            "margin": self.margin,
            "component_count": self.component_count,
            "canonical_seed": list(self.canonical_seed),
            "two_components": self.two_components,
            "interior_in_rect": self.interior_in_rect,
            "reconstruction_ok": self.reconstruction_ok,
            "exterior_escapes": self.exterior_escapes,
        }


def jordan_decomposition(curve: DigitalCurve, margin: int = 1) -> JordanDecomposition:
    """Separation of the grid by a simple square-free circuit.

    Verifies the preconditions, flood-fills the margined box, checks the
    two-component separation, locates the interior through the canonical
    seed (one step inside the lowest-leftmost curve point), and re-derives
    the curve from the interior's extremal points.
    """
    curve = curve.canonical()
    if curve.is_constant():
        raise DigitalCurveError("constant circuit has no separation")
    ok, witness = is_simple_curve(curve)
    if not ok:
        raise NotSimpleCurveError(witness)
    has_sq, square = contains_unit_square(curve)
    if has_sq:
        raise UnitSquareError(square)
    if margin < 1:
        raise DigitalCurveError("margin must be >= 1")

    pts = curve.point_set()
    count, comps, box = box_components(curve, margin)
    ys = [p[1] for p in pts]
    y_min = min(ys)
    x1 = min(p[0] for p in pts if p[1] == y_min)
    seed = (x1 + 1, y_min + 1)
    if seed in pts:
        raise JordanCheckError(f"canonical seed {seed} lies on the curve")
    interior = None
    for comp in comps:
        if seed in comp:
            interior = comp
            break
    if interior is None:
        raise JordanCheckError(f"canonical seed {seed} outside the box")
    exterior = frozenset().union(*(c for c in comps if c is not interior)) if count > 1 else frozenset()
    if count != 2:
        raise JordanCheckError(f"expected exactly 2 components, found {count}")

    xs = [p[0] for p in pts]
    rect_ok = all(min(xs) <= p[0] <= max(xs) and min(ys) <= p[1] <= max(ys) for p in interior)
    escapes = any(
        p[0] in (box[0], box[1]) or p[1] in (box[2], box[3]) for p in exterior
    )
    completion = gamma_completion(curve, interior)
    reconstruction_ok = completion == pts
    return JordanDecomposition(
        interior=interior,
        exterior=exterior,
        box=box,
        margin=margin,
        component_count=count,
        canonical_seed=seed,
        two_components=(count == 2),
        interior_in_rect=rect_ok,
        reconstruction_ok=reconstruction_ok,
        exterior_escapes=escapes,
    )


def render_pgm(curve: DigitalCurve, decomp: JordanDecomposition) -> str:
    """Plain-text PGM bitmap: curve black, interior gray, exterior white."""
    xlo, xhi, ylo, yhi = decomp.box
    pts = curve.point_set()
    rows = []
    for y in range(yhi, ylo - 1, -1):
        row = []
        for x in range(xlo, xhi + 1):
            if (x, y) in pts:
                row.append(0)
            elif (x, y) in decomp.interior:
                row.append(1)
            else:
                row.append(2)
        rows.append(row)
    header = f"P2\n{xhi - xlo + 1} {yhi - ylo + 1}\n2\n"
    return header + "\n".join(" ".join(str(v) for v in row) for row in rows) + "\n"
