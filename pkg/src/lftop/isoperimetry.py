"""Isoperimetric and zoom isoperimetric constants, doubling and
small-neighborhood evidence on finite windows.

Infima over infinite families are replaced by enumerated families with
explicit flags: ``exhaustive`` means the whole declared family was
enumerated; anything else is best-found over a documented heuristic
family (nested neighborhoods, coordinate boxes, random connected blobs).
Windowed spaces restrict subsets to the safe interior and flag any
computed set that touches the contamination zone. Verdicts on windows
are evidence about the window, never proofs about the ambient space.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .exact import rational_token
from .npp import is_graph_type
from .spaces import (
    DegenerateSpaceError,
    MetricSpace,
    SpaceError,
    WindowError,
    closed_neighborhood,
    discrete_k_boundary,
    set_distance_keys,
)


@dataclass
class SubsetPolicy:
    """Which finite subsets a constant is minimized over.

    Defaults: windowed spaces use every non-empty subset of the safe
    interior; standalone spaces use subsets of size at most n//2 (taking
    the whole space always gives boundary 0/|X| = 0 and says nothing).
    """

    family: str = "auto"  # "auto" | "exhaustive" | "heuristic"
    max_size: Optional[int] = None
    interior_only: Optional[bool] = None
    include_whole: bool = False
    budget: int = 4_000_000
    n_centers: int = 24
    n_random: int = 48
    seed: int = 0
    variant: str = "literal"

    def describe(self) -> dict:
        return {
            "family": self.family,
            "max_size": self.max_size,
            "interior_only": self.interior_only,
            "include_whole": self.include_whole,
            "budget": self.budget,
            "n_centers": self.n_centers,
            "n_random": self.n_random,
            "seed": self.seed,
            "variant": self.variant,
        }


@dataclass
class IsoReport:
    k: int
    value: Fraction
    witness: tuple
    exhaustive: bool
    contaminated: bool
    family_size: int
    policy: dict

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "value": rational_token(self.value),
            "value_float": float(self.value),
            "witness": list(self.witness),
            "exhaustive": self.exhaustive,
            "contaminated": self.contaminated,
            "family_size": self.family_size,
            "policy": {k: (v if not isinstance(v, Fraction) else rational_token(v)) for k, v in self.policy.items()},
        }


def _resolve_policy(space: MetricSpace, policy: Optional[SubsetPolicy]):
    policy = policy or SubsetPolicy()
    interior_only = policy.interior_only
    if interior_only is None:
        interior_only = space.window is not None
    cands = space.interior_ids() if interior_only else tuple(range(space.n))
    if policy.max_size is not None:
        max_size = min(policy.max_size, len(cands))
    elif space.window is not None and interior_only:
        max_size = len(cands)
    else:
        max_size = space.n // 2
    if not policy.include_whole and max_size >= space.n:
        max_size = space.n - 1
    return policy, cands, max_size


def _family_count(n_cands: int, max_size: int) -> int:
    return sum(math.comb(n_cands, s) for s in range(1, max_size + 1))


def _exhaustive_affordable(space: MetricSpace, n_cands: int, max_size: int, k: int, budget: int) -> bool:
    """Whether full enumeration fits the budget under a per-subset cost model.

    The bitmask path (graph metrics) costs O(1) per subset; the generic
    path costs O(1) at k=1 and O(|A|) beyond, which is what gets charged.
    """
    count = _family_count(n_cands, max_size)
    if space.is_graph_metric():
        return count <= budget
    if k == 1:
        return count <= budget // 32
    work = sum(math.comb(n_cands, s) * (s + 1) for s in range(1, max_size + 1))
    return work <= budget // 16


def _graph_ball_masks(space: MetricSpace, k: int):
    K = space._K
    masks = []
    for i in range(space.n):
        m = 0
        for j in np.nonzero(K[i] <= k)[0]:
            m |= 1 << int(j)
        masks.append(m)
    return masks


def _iter_subsets(cands, max_size):
    """All non-empty subsets of cands with size <= max_size, by extension order."""
    n = len(cands)
    stack = [((), 0)]
    while stack:
        prefix, start = stack.pop()
        for i in range(n - 1, start - 1, -1):
            sub = prefix + (cands[i],)
            yield sub
            if len(sub) < max_size:
                stack.append((sub, i + 1))


def _exhaustive_min_ratio_graph(space, cands, max_size, k):
    """Exact minimum of |dB_k(A)|/|A| over the family, bitmask fast path.

    Valid because on connected graphs the discrete k-neighborhood equals
    the closed k-ball of the set (verified property of the chain machinery).
    """
    ball = _graph_ball_masks(space, k)
    best = None  # (num, den, witness)
    n = len(cands)

    def visit(prefix_ids, amask, ormask, start):
        nonlocal best
        for t in range(start, n):
            v = cands[t]
            ids = prefix_ids + (v,)
            am = amask | (1 << v)
            om = ormask | ball[v]
            num = (om & ~am).bit_count()
            den = len(ids)
            if best is None or num * best[1] < best[0] * den:
                best = (num, den, ids)
            if den < max_size:
                visit(ids, am, om, t + 1)

    visit((), 0, 0, 0)
    num, den, ids = best
    return Fraction(num, den), ids


def _exhaustive_min_ratio_generic(space, cands, max_size, k, variant):
    best = None
    for size in range(1, max_size + 1):
        for A in itertools.combinations(cands, size):
            b = len(discrete_k_boundary(space, A, k, variant=variant))
            if best is None or b * best[1] < best[0] * size:
                best = (b, size, A)
    num, den, ids = best
    return Fraction(num, den), ids


def _heuristic_family(space: MetricSpace, cands, max_size, policy: SubsetPolicy):
    """Nested neighborhoods, coordinate boxes and seeded connected blobs."""
    cset = set(cands)
    seen = set()
    family = []

    def add(ids):
        A = tuple(sorted(ids))
        if A and len(A) <= max_size and set(A) <= cset and A not in seen:
            seen.add(A)
            family.append(A)

    # full candidate set
    add(cands)

    # nested level-prefix neighborhoods around sampled centers
    centers = list(cands)
    if len(centers) > policy.n_centers:
        stride = max(1, len(centers) // policy.n_centers)
        centers = centers[::stride][: policy.n_centers]
    for c in centers:
        lv = space.levels(c)
        acc = []
        for members in lv.members:
            if any(m not in cset for m in members):
                break
            acc.extend(members)
            if len(acc) > max_size:
                break
            add(acc)

    # axis-aligned boxes for integer coordinates in dimension 1 or 2
    if space.coords is not None and len(space.coords[0]) in (1, 2):
        coords = space.coords
        index = {tuple(p): i for i, p in enumerate(coords)}
        dim = len(coords[0])
        lo = [min(p[d] for p in coords) for d in range(dim)]
        hi = [max(p[d] for p in coords) for d in range(dim)]
        cx = [(lo[d] + hi[d]) // 2 for d in range(dim)]
        limit = max(int(hi[d] - lo[d]) for d in range(dim)) + 1
        for r in range(0, limit):
            if dim == 1:
                ids = [index.get((Fraction(x),)) for x in range(int(cx[0] - r), int(cx[0] + r) + 1)]
            else:
                ids = [
                    index.get((Fraction(x), Fraction(y)))
                    for x in range(int(cx[0] - r), int(cx[0] + r) + 1)
                    for y in range(int(cx[1] - r), int(cx[1] + r) + 1)
                ]
            if any(i is None or i not in cset for i in ids):
                break
            add(ids)

    # seeded random connected blobs over the step relation
    rng = np.random.RandomState(policy.seed)
    adj = space.mutual_adjacency()
    for _ in range(policy.n_random):
        if not cands:
            break
        start = cands[int(rng.randint(len(cands)))]
        target = 1 + int(rng.randint(max(1, min(max_size, len(cands)))))
        blob = {start}
        frontier = [v for v in adj[start] if v in cset]
        while frontier and len(blob) < target:
            pick = frontier[int(rng.randint(len(frontier)))]
            frontier.remove(pick)
            if pick in blob:
                continue
            blob.add(pick)
            frontier.extend(v for v in adj[pick] if v in cset and v not in blob)
        add(blob)

    return family


def iota_k(space: MetricSpace, k: int, policy: Optional[SubsetPolicy] = None) -> IsoReport:
    """k-isoperimetric constant: infimum of |dB_k(A)|/|A| over the policy family."""
    if k < 1:
        raise SpaceError("k must be >= 1")
    policy, cands, max_size = _resolve_policy(space, policy)
    if not cands or max_size < 1:
        raise SpaceError("empty subset family under this policy")

    count = _family_count(len(cands), max_size)
    mode = policy.family
    if mode == "auto":
        mode = "exhaustive" if count <= policy.budget else "heuristic"
    if mode == "exhaustive" and count > policy.budget:
        raise SpaceError(
            f"exhaustive family has {count} subsets > budget {policy.budget}"
        )

    if mode == "exhaustive":
        if space.is_graph_metric() and policy.variant == "literal":
            value, witness = _exhaustive_min_ratio_graph(space, cands, max_size, k)
        else:
            value, witness = _exhaustive_min_ratio_generic(
                space, cands, max_size, k, policy.variant
            )
        family_size = count
        exhaustive = True
    else:
        family = _heuristic_family(space, cands, max_size, policy)
        if not family:
            raise SpaceError("empty subset family under this policy")
        best = None
        for A in family:
            b = len(discrete_k_boundary(space, A, k, variant=policy.variant))
            if best is None or b * best[1] < best[0] * len(A):
                best = (b, len(A), A)
        value = Fraction(best[0], best[1])
        witness = best[2]
        family_size = len(family)
        exhaustive = False

    boundary = discrete_k_boundary(space, witness, k, variant=policy.variant)
    assert Fraction(len(boundary), len(witness)) == value
    contaminated = space.contaminated(boundary | set(witness))
    return IsoReport(
        k=k,
        value=value,
        witness=tuple(sorted(witness)),
        exhaustive=exhaustive,
        contaminated=contaminated,
        family_size=family_size,
        policy=policy.describe(),
    )


@dataclass
class GlobalIsoReport:
    per_k: dict
    sup_value: Fraction
    sup_k: int
    kmax: int
    converged: bool = False  # enumerated range only, never a proof of the sup

    def as_dict(self) -> dict:
        return {
            "per_k": {k: r.as_dict() for k, r in self.per_k.items()},
            "sup_value": rational_token(self.sup_value),
            "sup_k": self.sup_k,
            "kmax": self.kmax,
            "converged": self.converged,
        }


def iota_global(space: MetricSpace, kmax: int, policy: Optional[SubsetPolicy] = None) -> GlobalIsoReport:
    """Per-k reports plus the (non-converged) supremum over k <= kmax."""
    per_k = {}
    sup_value, sup_k = None, None
    for k in range(1, kmax + 1):
        rep = iota_k(space, k, policy)
        per_k[k] = rep
        if sup_value is None or rep.value > sup_value:
            sup_value, sup_k = rep.value, k
    return GlobalIsoReport(per_k=per_k, sup_value=sup_value, sup_k=sup_k, kmax=kmax)


def doubling_check(space: MetricSpace, k: int, policy: Optional[SubsetPolicy] = None):
    """True iff |cN_k(A)| >= 2|A| for every A in the policy family.

    Returns (ok, witness) with the first failing A in enumeration order.
    """
    policy, cands, max_size = _resolve_policy(space, policy)
    if not cands or max_size < 1:
        raise SpaceError("empty subset family under this policy")
    count = _family_count(len(cands), max_size)
    mode = policy.family
    if mode == "auto":
        mode = "exhaustive" if count <= policy.budget else "heuristic"

    if mode == "exhaustive" and space.is_graph_metric():
        ball = _graph_ball_masks(space, k)
        for A in _iter_subsets(cands, max_size):
            om = 0
            for a in A:
                om |= ball[a]
            if om.bit_count() < 2 * len(A):
                return False, tuple(sorted(A))
        return True, None

    subsets = (
        _iter_subsets(cands, max_size)
        if mode == "exhaustive"
        else _heuristic_family(space, cands, max_size, policy)
    )
    for A in subsets:
        if len(closed_neighborhood(space, A, k)) < 2 * len(A):
            return False, tuple(sorted(A))
    return True, None


@dataclass
class SnVerdict:
    verdict: str  # "sn-evidence" | "not-sn-evidence"
    per_k: dict
    threshold: Fraction
    kmax: int
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "per_k": {k: r.as_dict() for k, r in self.per_k.items()},
            "threshold": rational_token(self.threshold),
            "kmax": self.kmax,
            "note": self.note,
        }


def property_sn_locally_finite(
    space: MetricSpace,
    kmax: int,
    policy: Optional[SubsetPolicy] = None,
    threshold: Fraction = Fraction(1, 2),
) -> SnVerdict:
    """Small-neighborhood evidence: small boundary ratios at every k support
    SN; a family value above the threshold (exhaustive where possible) is
    evidence against. Windows make this evidence, never proof."""
    if space.n == 1:
        return SnVerdict(
            "sn-evidence", {}, threshold, kmax, note="singleton: boundary of the point set is empty"
        )
    per_k = {}
    worst = None
    for k in range(1, kmax + 1):
        rep = iota_k(space, k, policy)
        per_k[k] = rep
        if worst is None or rep.value > worst:
            worst = rep.value
    verdict = "sn-evidence" if worst <= threshold else "not-sn-evidence"
    return SnVerdict(verdict, per_k, threshold, kmax)


# -- zoom constants ---------------------------------------------------


@dataclass
class ZoomEntry:
    n: int
    radius: int
    size_inner: int
    size_outer: int
    ratio: Fraction
    contaminated: bool


@dataclass
class ZoomReport:
    x: int
    kmax: int
    nmax: int
    entries: dict  # k -> list[ZoomEntry]
    zeta_k: dict  # k -> Fraction | None
    zeta: Optional[Fraction]

    def as_dict(self) -> dict:
        return {
            "x": self.x,
            "kmax": self.kmax,
            "nmax": self.nmax,
            "entries": {
                k: [
                    {
                        "n": e.n,
                        "radius": e.radius,
                        "size_inner": e.size_inner,
                        "size_outer": e.size_outer,
                        "ratio": rational_token(e.ratio),
                        "contaminated": e.contaminated,
                    }
                    for e in v
                ]
                for k, v in self.entries.items()
            },
            "zeta_k": {k: (rational_token(v) if v is not None else None) for k, v in self.zeta_k.items()},
            "zeta": rational_token(self.zeta) if self.zeta is not None else None,
        }


def zoom_constants(space: MetricSpace, x: int, kmax: int, nmax: int) -> ZoomReport:
    """Growth ratios |dN_{nk}(x)| / |dN_{(n-1)k}(x)| of nested neighborhoods.

    zeta_k(x) is the minimum over uncontaminated n, zeta(x) the maximum of
    those over k <= kmax. Entries whose outer neighborhood touches the
    window's contamination zone are flagged and excluded from the minima.
    """
    if space.n == 1:
        raise DegenerateSpaceError("zoom constants need at least two points")
    lv = space.levels(x)
    sizes = []
    acc = 0
    for members in lv.members:
        acc += len(members)
        sizes.append(acc)

    def dn_size(m: int) -> int:
        return sizes[min(m, len(sizes) - 1)]

    zone = space.zone()
    contam_level = None
    for t, members in enumerate(lv.members):
        if any(p in zone for p in members):
            contam_level = t
            break

    entries = {}
    zeta_k = {}
    any_clean = False
    for k in range(1, kmax + 1):
        rows = []
        best = None
        for n in range(1, nmax + 1):
            m1, m0 = n * k, (n - 1) * k
            s1, s0 = dn_size(m1), dn_size(m0)
            contaminated = contam_level is not None and m1 >= contam_level
            ratio = Fraction(s1, s0)
            rows.append(ZoomEntry(n, m1, s0, s1, ratio, contaminated))
            if not contaminated:
                any_clean = True
                if best is None or ratio < best:
                    best = ratio
        entries[k] = rows
        zeta_k[k] = best
    if not any_clean:
        raise WindowError("window too small: every zoom entry is contaminated")
    valid = [v for v in zeta_k.values() if v is not None]
    zeta = max(valid) if valid else None
    return ZoomReport(x=x, kmax=kmax, nmax=nmax, entries=entries, zeta_k=zeta_k, zeta=zeta)


@dataclass
class ZoomExtremes:
    zeta_plus: Fraction
    zeta_minus: Fraction
    lam: Fraction
    per_point: dict  # id -> Fraction
    skipped: tuple

    def as_dict(self) -> dict:
        return {
            "zeta_plus": rational_token(self.zeta_plus),
            "zeta_minus": rational_token(self.zeta_minus),
            "lambda": rational_token(self.lam),
            "per_point": {str(i): rational_token(v) for i, v in sorted(self.per_point.items())},
            "skipped": list(self.skipped),
        }


def zoom_extremes(space: MetricSpace, kmax: int, nmax: int) -> ZoomExtremes:
    """sup/inf of zeta(x) over uncontaminated points and their gap."""
    per_point = {}
    skipped = []
    for x in space.interior_ids():
        try:
            rep = zoom_constants(space, x, kmax, nmax)
        except (WindowError, DegenerateSpaceError):
            skipped.append(x)
            continue
        if rep.zeta is None:
            skipped.append(x)
            continue
        per_point[x] = rep.zeta
    if not per_point:
        raise WindowError("no point admits an uncontaminated zoom table")
    zp = max(per_point.values())
    zm = min(per_point.values())
    return ZoomExtremes(zp, zm, zp - zm, per_point, tuple(skipped))


@dataclass
class AmenabilityReport:
    verdict: str  # "locally-amenable-evidence" | "not-locally-amenable-evidence"
    graph_type: bool
    graph_type_exhaustive: bool
    observation_point: int
    zeta_estimate: Fraction
    threshold: Fraction
    one_point_inference: bool
    cross_check: Optional[dict] = None

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "graph_type": self.graph_type,
            "graph_type_exhaustive": self.graph_type_exhaustive,
            "observation_point": self.observation_point,
            "zeta_estimate": rational_token(self.zeta_estimate),
            "threshold": rational_token(self.threshold),
            "one_point_inference": self.one_point_inference,
            "cross_check": self.cross_check,
        }


def local_amenability_check(
    space: MetricSpace,
    kmax: int = 3,
    nmax: int = 12,
    threshold: Fraction = Fraction(6, 5),
    cross_check_limit: int = 500,
) -> AmenabilityReport:
    """Evidence that every local observer sees vanishing growth ratios.

    On graph-type spaces one interior observation point decides (ball-like
    neighborhoods transport the estimate to every point); a full per-point
    table is still computed as a cross-check when the space is small
    enough. Otherwise all interior points are evaluated.
    """
    gt = is_graph_type(space)
    interior = space.interior_ids()
    if not interior:
        raise WindowError("no interior points")
    # deepest interior point: maximal distance to the rim, least id on ties
    if space.window is not None:
        mins = set_distance_keys(space, list(space.window.rim))
        obs = max(interior, key=lambda i: (mins[i], -i))
    else:
        obs = interior[0]

    rep = zoom_constants(space, obs, kmax, nmax)
    est = rep.zeta
    one_point = bool(gt.ok)
    cross = None
    if not gt.ok or space.n <= cross_check_limit:
        try:
            ext = zoom_extremes(space, kmax, nmax)
            cross = ext.as_dict()
            if not gt.ok:
                est = ext.zeta_plus
        except WindowError:
            cross = None
    verdict = (
        "locally-amenable-evidence" if est is not None and est <= threshold else "not-locally-amenable-evidence"
    )
    return AmenabilityReport(
        verdict=verdict,
        graph_type=gt.ok,
        graph_type_exhaustive=gt.exhaustive,
        observation_point=obs,
        zeta_estimate=est,
        threshold=threshold,
        one_point_inference=one_point,
        cross_check=cross,
    )
