import itertools
import random
from fractions import Fraction

import pytest

from lftop import (
    Dist,
    MetricSpace,
    closed_neighborhood,
    discrete_k_boundary,
    discrete_k_neighborhood,
    discrete_one_neighborhood,
    distance_levels,
    k_boundary,
    l1_product,
    rescaled,
    step_and_normal_form,
    subspace,
)
from lftop.documents import digest_document, load_space, save_space
from lftop.fixtures import (
    cycle_graph,
    eight_point_ring,
    grid2d,
    random_connected_graph,
    tree_window,
    z_window,
)
from lftop.spaces import (
    DisconnectedGraphError,
    DocumentFormatError,
    MetricAxiomError,
    NotPathConnectedError,
    SpaceError,
    UnsupportedOperationError,
)

from conftest import all_subsets, coords_index, cycle, oracle_dnk_literal, oracle_graph_distance, path


# -- loading and validation -------------------------------------------


def test_load_matrix_path3():
    s = load_space({"kind": "matrix", "d": [[0, 1, 2], [1, 0, 1], [2, 1, 0]]})
    assert s.n == 3
    assert s.dist(0, 2) == Dist(2)


def test_triangle_violation_reports_triple():
    with pytest.raises(MetricAxiomError) as e:
        MetricSpace.from_matrix([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    assert e.value.triple is not None


def test_disconnected_graph_reports_components():
    with pytest.raises(DisconnectedGraphError) as e:
        MetricSpace.from_graph(4, [(0, 1), (2, 3)])
    assert sorted(map(sorted, e.value.components)) == [[0, 1], [2, 3]]


def test_malformed_documents():
    with pytest.raises(DocumentFormatError):
        load_space({"kind": "nope"})
    with pytest.raises(DocumentFormatError):
        load_space({"kind": "matrix"})
    with pytest.raises(MetricAxiomError):
        load_space({"kind": "points", "metric": "euclidean", "points": [[0, 0], [0, 0]]})


def test_rational_matrix_tokens():
    s = load_space({"kind": "matrix", "d": [[0, "1/2"], ["1/2", 0]]})
    assert s.dist(0, 1) == Dist(Fraction(1, 2))


# -- discrete 1-neighborhood and levels --------------------------------


def test_dn1_five_point(five_point):
    idx = coords_index(five_point)
    assert discrete_one_neighborhood(five_point, idx[(0, 0)]) == {idx[(0, 0)], idx[(-1, 0)]}


def test_dn1_grid_center():
    g = load_space(grid2d(5, margin=None))
    idx = coords_index(g)
    got = discrete_one_neighborhood(g, idx[(2, 2)])
    assert got == {idx[p] for p in [(2, 2), (3, 2), (1, 2), (2, 3), (2, 1)]}


def test_dn1_singleton():
    s = MetricSpace.from_matrix([[0]])
    assert discrete_one_neighborhood(s, 0) == {0}


def test_levels_five_point(five_point):
    # enumeration oracle: the three positive distances from the origin are
    # 1, sqrt(2), sqrt(2), sqrt(2) — so three levels in total
    idx = coords_index(five_point)
    lv = distance_levels(five_point, idx[(0, 0)])
    assert [v.token() for v in lv.levels] == ["0", "1", "sqrt(2)"]
    assert lv.members[0] == (idx[(0, 0)],)
    assert lv.members[1] == (idx[(-1, 0)],)
    assert set(lv.members[2]) == {idx[(-1, 1)], idx[(1, 1)], idx[(1, -1)]}


def test_levels_singleton_and_cycle():
    s = MetricSpace.from_matrix([[0]])
    assert [v.token() for v in distance_levels(s, 0).levels] == ["0"]
    c5 = cycle(5)
    lv = distance_levels(c5, 0)
    assert [v.token() for v in lv.levels] == ["0", "1", "2"]
    assert [len(m) for m in lv.members] == [1, 2, 2]


def test_dn1_matches_first_two_levels():
    for space in [cycle(6), load_space(eight_point_ring()), load_space(grid2d(4, margin=None))]:
        for x in range(space.n):
            lv = distance_levels(space, x)
            first_two = set(lv.members[0]) | (set(lv.members[1]) if len(lv.levels) > 1 else set())
            assert discrete_one_neighborhood(space, x) == first_two


# -- discrete k-neighborhoods ------------------------------------------


def test_dnk_against_sequence_oracle(five_point, ring8):
    spaces = [five_point, ring8, cycle(6), path(5), load_space(grid2d(4, margin=None))]
    rng = random.Random(1)
    for space in spaces:
        ids = range(space.n)
        pool = [A for A in all_subsets(ids, 3)]
        for A in rng.sample(pool, min(12, len(pool))):
            for k in (1, 2, 3):
                assert discrete_k_neighborhood(space, A, k) == oracle_dnk_literal(space, A, k), (
                    space.meta.get("kind"),
                    A,
                    k,
                )


def test_dnk_grid_window_example():
    g = load_space(grid2d(7, margin=None))
    idx = coords_index(g)
    A = [idx[(3, 3)]]
    got = discrete_k_neighborhood(g, A, 2)
    expect = {idx[(3, 3)]}
    expect |= {idx[p] for p in [(4, 3), (2, 3), (3, 4), (3, 2)]}
    expect |= {idx[p] for p in [(4, 4), (2, 4), (2, 2), (4, 2)]}
    assert got == expect
    assert got == oracle_dnk_literal(g, A, 2)


def test_dnk_whole_space_fixed_point():
    for space in [cycle(5), path(4)]:
        A = tuple(range(space.n))
        for k in (1, 3):
            assert discrete_k_neighborhood(space, A, k) == set(A)
            assert discrete_k_boundary(space, A, k) == frozenset()


def test_dbk_p5_and_c6_examples():
    p5 = path(5)
    assert discrete_k_boundary(p5, [2], 1) == {1, 3}
    c6 = cycle(6)
    assert discrete_k_boundary(c6, [0, 1, 2], 2) == {3, 4, 5}


def test_graph_dictionary_balls():
    # on connected graphs the k-boundary is the closed k-ball minus the set
    rng = random.Random(7)
    for trial in range(8):
        doc = random_connected_graph(rng.randrange(4, 9), seed=trial)
        space = load_space(doc)
        dist = oracle_graph_distance(doc["n"], [tuple(e) for e in doc["edges"]])
        for A in all_subsets(range(space.n), 3):
            for k in (1, 2, 4):
                want = frozenset(
                    y for y in range(space.n) if y not in A and min(dist[y][a] for a in A) <= k
                )
                assert discrete_k_boundary(space, A, k) == want


def test_literal_and_strict_agree_on_graphs():
    rng = random.Random(3)
    for trial in range(6):
        doc = random_connected_graph(rng.randrange(4, 9), seed=100 + trial)
        space = load_space(doc)
        for A in all_subsets(range(space.n), 2):
            for k in (1, 2, 3):
                lit = discrete_k_neighborhood(space, A, k, variant="literal")
                strict = discrete_k_neighborhood(space, A, k, variant="strict")
                assert lit == strict


def test_dnk_monotone():
    for space in [cycle(7), load_space(eight_point_ring())]:
        for A in [(0,), (0, 1)]:
            prev = set(A)
            for k in range(1, 5):
                cur = discrete_k_neighborhood(space, A, k)
                assert prev <= cur
                prev = cur


def test_k_boundary_alias():
    c6 = cycle(6)
    assert k_boundary(c6, [0], 2) == discrete_k_boundary(c6, [0], 2)


def test_dnk_empty_A_raises():
    with pytest.raises(SpaceError):
        discrete_k_neighborhood(cycle(4), [], 1)


# -- closed neighborhoods ----------------------------------------------


def test_closed_neighborhood_examples():
    c6 = cycle(6)
    assert closed_neighborhood(c6, [0], 0) == {0}
    assert len(closed_neighborhood(c6, [0], 2)) == 5
    g = load_space(grid2d(5, margin=None))
    idx = coords_index(g)
    got = closed_neighborhood(g, [idx[(2, 2)]], 1)
    assert got == {idx[p] for p in [(2, 2), (3, 2), (1, 2), (2, 3), (2, 1)]}


# -- step and normal form ----------------------------------------------


def test_normal_form_unit_path_unchanged():
    p = path(4)
    step, norm = step_and_normal_form(p)
    assert step == Dist(1)
    assert norm is p


def test_normal_form_not_connected(five_point):
    with pytest.raises(NotPathConnectedError):
        step_and_normal_form(five_point)


def test_normal_form_rescales_half_steps():
    s = MetricSpace.from_matrix(
        [[0, "1/2", 1, "3/2"], ["1/2", 0, "1/2", 1], [1, "1/2", 0, "1/2"], ["3/2", 1, "1/2", 0]]
    )
    step, norm = step_and_normal_form(s)
    assert step == Dist(Fraction(1, 2))
    assert [norm.key(0, j) for j in range(4)] == [0, 1, 2, 3]


# -- products and transforms --------------------------------------------


def test_l1_product_p2_squared_is_four_cycle():
    p2 = path(2)
    q = l1_product(p2, p2)
    c4 = cycle(4)
    got = sorted(sorted(q.key(i, j) for j in range(4)) for i in range(4))
    want = sorted(sorted(c4.key(i, j) for j in range(4)) for i in range(4))
    assert got == want


def test_l1_product_singleton_identity(five_point):
    single = MetricSpace.from_matrix([[0]])
    assert l1_product(five_point, single) is five_point
    assert l1_product(single, five_point) is five_point


def test_l1_product_p3_grid_connected():
    p3 = path(3)
    g = l1_product(p3, p3)
    assert g.n == 9
    assert len(g.components()) == 1


def test_l1_product_rejects_irrational_factor(ring8):
    with pytest.raises(UnsupportedOperationError):
        l1_product(ring8, ring8)


def test_rescaled_and_subspace(ring8):
    r2 = rescaled(ring8, 3)
    assert r2.dist(0, 1) == ring8.dist(0, 1) * 3
    sub = subspace(ring8, [0, 1, 2])
    assert sub.n == 3
    assert sub.dist(0, 1) == ring8.dist(0, 1)


# -- round trips and windows ---------------------------------------------


def test_save_load_round_trip():
    docs = [
        cycle_graph(5),
        grid2d(4, metric="l1", margin=1),
        {"kind": "matrix", "d": [[0, "1/2"], ["1/2", 0]]},
        eight_point_ring(),
        tree_window(3, 3),
    ]
    for doc in docs:
        s1 = load_space(doc)
        d1 = save_space(s1)
        s2 = load_space(d1)
        d2 = save_space(s2)
        assert digest_document(d1) == digest_document(d2)
        assert s1.kind == s2.kind and s1.n == s2.n
        assert all(s1.key(i, j) == s2.key(i, j) for i in range(s1.n) for j in range(s1.n))


def test_window_rim_and_zone():
    z = load_space(z_window(5, margin=1))
    idx = coords_index(z)
    assert z.zone() == {idx[(-5,)], idx[(5,)]}
    assert len(z.interior_ids()) == 9
    z2 = load_space(z_window(5, margin=2))
    assert z2.zone() == {idx[(-5,)], idx[(5,)], idx[(-4,)], idx[(4,)]}
    assert z.contaminated([idx[(5,)]])
    assert not z.contaminated([idx[(0,)]])


def test_graph_window_needs_rim():
    with pytest.raises(SpaceError):
        load_space({"kind": "graph", "n": 3, "edges": [[0, 1], [1, 2]], "window": {"margin": 1}})


def test_npp_transport_of_dnk(ring8):
    # level-preserving relabeling transports neighborhoods exactly
    rng = random.Random(5)
    perm = list(range(ring8.n))
    rng.shuffle(perm)
    keys = [[ring8.key(perm.index(i), perm.index(j)) for j in range(8)] for i in range(8)]
    # build the relabeled copy directly from exact keys
    import numpy as np

    relabeled = MetricSpace(8, ring8.kind, np.array(keys, dtype=np.int64), meta={"kind": "matrix"})
    for A in all_subsets(range(8), 2):
        for k in (1, 2, 3):
            lhs = frozenset(perm[v] for v in discrete_k_neighborhood(ring8, A, k))
            rhs = discrete_k_neighborhood(relabeled, tuple(sorted(perm[a] for a in A)), k)
            assert lhs == rhs
