import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from lftop import (
    Dist,
    MetricSpace,
    coverings,
    displacement,
    distortion_lower_bound,
    distortion_lower_bound_components,
    edge_set,
    metric_defect,
    minimal_continuous_paths,
    spectral_gap_p,
)
from lftop.distortion import DistortionError
from lftop.documents import load_space
from lftop.fixtures import eight_point_ring, random_connected_graph

from conftest import coords_index, cycle, oracle_graph_distance, path


# -- minimal paths -----------------------------------------------------------


def test_adjacent_pair_single_path():
    p3 = path(3)
    assert minimal_continuous_paths(p3, 0, 1) == [(0, 1)]


def test_c4_opposite_corners_two_paths():
    c4 = cycle(4)
    paths = minimal_continuous_paths(c4, 0, 2)
    assert paths == [(0, 1, 2), (0, 3, 2)]


def test_ring_minimal_paths(ring8):
    idx = coords_index(ring8)
    got = minimal_continuous_paths(ring8, idx[(-1, 1)], idx[(1, -1)])
    assert len(got) == 2 and all(len(p) == 5 for p in got)


# -- coverings -----------------------------------------------------------------


def test_graph_coverings_forced():
    c6 = cycle(6)
    p = minimal_continuous_paths(c6, 0, 3)[0]
    covs = coverings(c6, 0, 3, p)
    assert len(covs) == 1
    assert covs[0].parts == ((0, 1), (1, 2), (2, 3))


def test_covering_split_on_ring(ring8):
    # corner to far mid-side: three unit steps but distance sqrt(5), so two parts
    idx = coords_index(ring8)
    x, y = idx[(-1, 1)], idx[(1, 0)]
    assert ring8.dist(x, y) == Dist.sqrt_of(5)
    p = minimal_continuous_paths(ring8, x, y)[0]
    assert len(p) == 4
    covs = coverings(ring8, x, y, p)
    assert [c.parts for c in covs] == [
        ((0, 1), (1, 2, 3)),
        ((0, 1, 2), (2, 3)),
    ]


def test_covering_errors(ring8):
    idx = coords_index(ring8)
    with pytest.raises(DistortionError):
        coverings(ring8, idx[(-1, 1)], idx[(-1, 1)], (idx[(-1, 1)],))


# -- edge sets and defect ---------------------------------------------------------


def test_edge_set_of_graphs_is_edge_list():
    for trial in range(6):
        doc = random_connected_graph(4 + trial, seed=60 + trial)
        space = load_space(doc)
        E = edge_set(space)
        assert set(E.pairs) == {tuple(e) for e in doc["edges"]}
        assert metric_defect(space, E) == Dist(1)


def test_edge_set_two_point_space():
    two = MetricSpace.from_matrix([[0, 1], [1, 0]])
    E = edge_set(two)
    assert E.sorted_pairs() == [(0, 1)]
    assert metric_defect(two, E) == Dist(1)


def test_edge_set_ring_against_independent_enumeration(ring8):
    # independent oracle: recompute the definition with a fresh BFS
    from collections import deque

    adj = ring8.mutual_adjacency()

    def all_geodesics(x, y):
        dist = {x: 0}
        dq = deque([x])
        while dq:
            u = dq.popleft()
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    dq.append(v)
        paths = []

        def back(v, acc):
            if v == x:
                paths.append(tuple(reversed(acc + [x])))
                return
            for u in adj[v]:
                if dist.get(u) == dist[v] - 1:
                    back(u, acc + [v])

        back(y, [])
        return paths

    expect = set()
    for x in range(8):
        for y in range(x + 1, 8):
            s = ring8.dist(x, y).floor()
            for pth in all_geodesics(x, y):
                n = len(pth) - 1
                for mids in itertools.combinations(range(1, n), s - 1):
                    bk = (0,) + mids + (n,)
                    for t in range(s):
                        a, b = pth[bk[t]], pth[bk[t + 1]]
                        expect.add((min(a, b), max(a, b)))
    E = edge_set(ring8)
    assert set(E.pairs) == expect
    assert metric_defect(ring8, E) == Dist.sqrt_of(5)


def test_edge_mode_single_is_subset(ring8):
    E_all = edge_set(ring8, mode="all")
    E_one = edge_set(ring8, mode="single")
    assert set(E_one.pairs) <= set(E_all.pairs)


def test_defect_one_iff_graph_metric():
    # graphs: defect 1 and the metric equals hop distance; the ring: defect > 1
    for trial in range(4):
        doc = random_connected_graph(5 + trial, seed=80 + trial)
        space = load_space(doc)
        E = edge_set(space)
        assert metric_defect(space, E) == Dist(1)
        dist = oracle_graph_distance(doc["n"], [tuple(e) for e in doc["edges"]])
        assert all(
            space.key(i, j) == dist[i][j] for i in range(space.n) for j in range(space.n)
        )
    ring = load_space(eight_point_ring())
    assert metric_defect(ring, edge_set(ring)) > Dist(1)
    hop = oracle_graph_distance(8, [tuple(sorted((i, j))) for i in range(8) for j in ring.mutual_neighbors(i) if i < j])
    assert any(ring.dist(i, j) != Dist(hop[i][j]) for i in range(8) for j in range(8))


# -- spectral gap ------------------------------------------------------------------


def test_p2_gap_on_cycles_matches_formula_and_eigen_oracle():
    for n in (3, 4, 5, 6, 8, 10):
        cn = cycle(n)
        E = edge_set(cn)
        gap = spectral_gap_p(cn, E, 2)
        assert abs(gap.value - (2 - 2 * math.cos(2 * math.pi / n))) < 1e-9
        # independent oracle: eigenvalues of the explicitly assembled Laplacian
        L = np.zeros((n, n))
        for i in range(n):
            L[i, i] = 2
            L[i, (i + 1) % n] -= 1
            L[(i + 1) % n, i] -= 1
        lam = np.sort(np.linalg.eigvalsh(L))[1]
        assert abs(gap.value - lam) < 1e-9


def test_p2_gap_complete_graph():
    from lftop.fixtures import complete_graph

    for n in (3, 4, 6):
        kn = load_space(complete_graph(n))
        gap = spectral_gap_p(kn, edge_set(kn), 2)
        assert abs(gap.value - n) < 1e-9


def test_p2_minimizer_attains_value_and_random_f_dominates():
    c6 = cycle(6)
    E = edge_set(c6)
    gap = spectral_gap_p(c6, E, 2)
    f = gap.minimizer
    num = sum((f[j] - f[i]) ** 2 for i, j in E.sorted_pairs())
    den = ((f - f.mean()) ** 2).sum()
    assert abs(num / den - gap.value) < 1e-10
    rng = np.random.RandomState(3)
    for _ in range(50):
        g = rng.standard_normal(6)
        if np.allclose(g, g[0]):
            continue
        num = sum((g[j] - g[i]) ** 2 for i, j in E.sorted_pairs())
        den = ((g - g.mean()) ** 2).sum()
        assert num / den >= gap.value - 1e-9


def test_p_not_2_estimate_vs_grid_search():
    p3 = path(3)
    E = edge_set(p3)
    gap = spectral_gap_p(p3, E, 3)
    assert not gap.exact
    # coarse quantized search is also an upper bound on the infimum; descent
    # from good starts should not be beaten by it
    best = np.inf
    grid = np.linspace(-1, 1, 9)
    pairs = E.sorted_pairs()
    for f in itertools.product(grid, repeat=3):
        f = np.array(f)
        if f.max() == f.min():
            continue
        num = sum(abs(f[j] - f[i]) ** 3 for i, j in pairs)
        als = np.linspace(f.min(), f.max(), 41)
        den = (np.abs(f[None, :] - als[:, None]) ** 3).sum(axis=1).min()
        if den > 0:
            best = min(best, num / den)
    assert gap.value <= best + 1e-9


# -- displacement --------------------------------------------------------------------


def brute_displacement(space):
    best = None
    for perm in itertools.permutations(range(space.n)):
        m = min(space.dist(i, perm[i]) for i in range(space.n))
        if best is None or m > best:
            best = m
    return best


def test_displacement_cycles_floor_half():
    for n in (3, 4, 5, 6, 7, 8):
        cn = cycle(n)
        D, perm = displacement(cn)
        assert D == Dist(n // 2)
        assert D == brute_displacement(cn)
        assert sorted(perm) == list(range(n))
        assert min(cn.dist(i, perm[i]) for i in range(n)) == D


def test_displacement_two_points():
    two = MetricSpace.from_matrix([[0, "7/2"], ["7/2", 0]])
    D, perm = displacement(two)
    assert D == Dist(Fraction(7, 2)) and perm == (1, 0)


def test_displacement_five_point_matches_brute_force(five_point):
    D, _ = displacement(five_point)
    assert D == brute_displacement(five_point)


def test_displacement_needs_two_points():
    with pytest.raises(DistortionError):
        displacement(MetricSpace.from_matrix([[0]]))


# -- assembled bound -------------------------------------------------------------------


def square_embedding_distortion(space, coords):
    """Distortion of an explicit embedding given by float coordinates."""
    n = space.n
    expand = 0.0
    contract = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            de = math.dist(coords[i], coords[j])
            dm = float(space.dist(i, j))
            expand = max(expand, de / dm)
            contract = max(contract, dm / de)
    return expand * contract


def test_c4_bound_value_and_embedding_consistency():
    c4 = cycle(4)
    rep = distortion_lower_bound(c4, 2)
    assert rep.edge_count == 4
    assert rep.defect == "1"
    assert rep.displacement == "2"
    assert abs(rep.spectral_gap - 2.0) < 1e-12
    assert abs(rep.bound - math.sqrt(2) / 2) < 1e-12
    emb = square_embedding_distortion(c4, [(0, 0), (1, 0), (1, 1), (0, 1)])
    assert abs(emb - math.sqrt(2)) < 1e-12
    assert rep.bound <= emb + 1e-12


def test_c6_bound_is_three_halves_and_hexagon_tight():
    c6 = cycle(6)
    rep = distortion_lower_bound(c6, 2)
    assert abs(rep.bound - 1.5) < 1e-9
    hexa = [(math.cos(t * math.pi / 3), math.sin(t * math.pi / 3)) for t in range(6)]
    emb = square_embedding_distortion(c6, hexa)
    assert rep.bound <= emb + 1e-9
    assert abs(emb - 1.5) < 1e-12


def test_two_point_bound_report_parts():
    two = MetricSpace.from_matrix([[0, 1], [1, 0]])
    rep = distortion_lower_bound(two, 2)
    assert rep.edge_count == 1 and rep.displacement == "1" and rep.defect == "1"
    # direct evaluation of the two-point quotient: f=(0,1), centered sum 1/2
    assert abs(rep.spectral_gap - 2.0) < 1e-12
    assert rep.bound == pytest.approx(0.5 * math.sqrt(2 / (1 * 2.0)))


def test_components_c4_plus_c6_sup():
    c4, c6 = cycle(4), cycle(6)
    n = 10
    M = [[0] * n for _ in range(n)]
    for i in range(4):
        for j in range(4):
            M[i][j] = c4.key(i, j)
    for i in range(6):
        for j in range(6):
            M[4 + i][4 + j] = c6.key(i, j)
    for i in range(4):
        for j in range(6):
            M[i][4 + j] = M[4 + j][i] = 100
    union = MetricSpace.from_matrix(M)
    rep = distortion_lower_bound_components(union, 2)
    assert abs(rep.bound - 1.5) < 1e-9
    assert len(rep.per_component) == 2


def test_components_five_point_skips_singletons(five_point):
    rep = distortion_lower_bound_components(five_point, 2)
    skipped = [row for row in rep.per_component if "skipped" in row]
    assert len(skipped) == 2
    assert rep.bound is not None


def test_single_component_matches_flat_call():
    c5 = cycle(5)
    a = distortion_lower_bound(c5, 2).bound
    b = distortion_lower_bound_components(c5, 2).bound
    assert a == b


# -- inequality chains on random data ---------------------------------------------


def exact_ratio_le(a_num, a_den, b_num, b_den):
    """a_num/a_den <= b_num/b_den for nonnegative exact values via squares."""
    return a_num.square * b_den.square <= b_num.square * a_den.square


def test_lipschitz_sandwich_exact():
    # max |f(x)-f(y)|/d(x,y) <= max-edge-difference <= defect * max-ratio
    rng = random.Random(17)
    fixtures = [cycle(5), cycle(6), path(4), load_space(eight_point_ring())]
    for space in fixtures:
        E = edge_set(space)
        d = metric_defect(space, E)
        for _ in range(50):
            f = [Fraction(rng.randrange(-20, 21), rng.randrange(1, 7)) for _ in range(space.n)]
            ratio = None  # (num Dist-like Fraction, den Dist)
            for i in range(space.n):
                for j in range(i + 1, space.n):
                    num = Dist(abs(f[i] - f[j]))
                    den = space.dist(i, j)
                    if ratio is None or not exact_ratio_le(num, den, ratio[0], ratio[1]):
                        if ratio is None or exact_ratio_le(ratio[0], ratio[1], num, den):
                            ratio = (num, den)
            edge_max = max(Dist(abs(f[i] - f[j])) for i, j in E.sorted_pairs())
            one = Dist(1)
            # ratio <= edge_max
            assert exact_ratio_le(ratio[0], ratio[1], edge_max, one)
            # edge_max <= d * ratio  <=>  edge_max * ratio_den <= d * ratio_num
            lhs = edge_max.square * ratio[1].square
            rhs = d.square * ratio[0].square
            assert lhs <= rhs


def test_permutation_energy_bound():
    # sum ||F(x) - F(perm(x))||_p^p <= 2^p sum ||F(x)||_p^p
    rng = np.random.RandomState(23)
    for n in (5, 8):
        for p in (1.0, 2.0, 3.0):
            for _ in range(40):
                F = rng.standard_normal((n, 4))
                perm = rng.permutation(n)
                lhs = (np.abs(F - F[perm]) ** p).sum()
                rhs = (2**p) * (np.abs(F) ** p).sum()
                assert lhs <= rhs + 1e-9
