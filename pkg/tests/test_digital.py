import random

import pytest

from lftop.digital import (
    CompletionPatternError,
    DigitalCurve,
    DigitalCurveError,
    JordanCheckError,
    NotSimpleCurveError,
    UnitSquareError,
    box_components,
    contains_unit_square,
    extremal_rays,
    gamma_completion,
    grid_boundaries,
    is_simple_curve,
    jordan_decomposition,
    reconstruction_closure,
    reduce_unit_square,
    render_pgm,
)
from lftop.documents import load_curve
from lftop.fixtures import figure8_curve, rectangle_curve, simple_curve_corpus


TWELVE_STEP = (
    (0, 0), (0, -1), (1, -1), (2, -1), (2, 0), (2, 1),
    (1, 1), (1, 2), (0, 2), (-1, 2), (-1, 1), (-1, 0), (0, 0),
)


def ring3():
    return load_curve(rectangle_curve(3, 3))


# -- grid boundaries ----------------------------------------------------------


def test_grid_boundaries_origin():
    axis, diag = grid_boundaries((0, 0))
    assert axis == {(0, 1), (0, -1), (-1, 0), (1, 0)}
    assert diag == {(1, 1), (-1, 1), (-1, -1), (1, -1)}


def test_grid_boundaries_translation_equivariant():
    rng = random.Random(5)
    for _ in range(20):
        p = (rng.randrange(-9, 10), rng.randrange(-9, 10))
        v = (rng.randrange(-9, 10), rng.randrange(-9, 10))
        a0, d0 = grid_boundaries(p)
        a1, d1 = grid_boundaries((p[0] + v[0], p[1] + v[1]))
        assert a1 == {(x + v[0], y + v[1]) for x, y in a0}
        assert d1 == {(x + v[0], y + v[1]) for x, y in d0}


# -- simplicity ---------------------------------------------------------------


def test_twelve_step_curve_fails_with_documented_witness():
    c = DigitalCurve(TWELVE_STEP)
    ok, witness = is_simple_curve(c)
    assert not ok
    assert witness[0] == (0, 0) and witness[1] == (1, 1)
    assert (witness[3] - witness[2]) == 6


def test_ring_is_simple():
    ok, w = is_simple_curve(ring3())
    assert ok and w is None


def test_constant_circuit_vacuously_simple_but_rejected_by_jordan():
    c = DigitalCurve(((2, 2), (2, 2)))
    assert is_simple_curve(c)[0]
    with pytest.raises(DigitalCurveError):
        jordan_decomposition(c)


def test_simplicity_invariant_under_symmetries():
    curves = [tuple(ring3().points), TWELVE_STEP]
    sym = [
        lambda x, y: (x, y),
        lambda x, y: (-x, y),
        lambda x, y: (x, -y),
        lambda x, y: (-x, -y),
        lambda x, y: (y, x),
        lambda x, y: (-y, x),
        lambda x, y: (y, -x),
        lambda x, y: (-y, -x),
    ]
    rng = random.Random(9)
    for pts in curves:
        want = is_simple_curve(DigitalCurve(pts))[0]
        for s in sym:
            tx, ty = rng.randrange(-5, 6), rng.randrange(-5, 6)
            moved = tuple((s(x, y)[0] + tx, s(x, y)[1] + ty) for x, y in pts)
            assert is_simple_curve(DigitalCurve(moved))[0] == want


# -- unit squares --------------------------------------------------------------


def test_unit_square_detection():
    block = DigitalCurve(((0, 0), (1, 0), (1, 1), (0, 1), (0, 0)))
    assert contains_unit_square(block)[0]
    assert not contains_unit_square(ring3())[0]
    assert not contains_unit_square(DigitalCurve(TWELVE_STEP))[0]


def test_reduce_unit_square_helper():
    block = DigitalCurve(((0, 0), (1, 0), (1, 1), (0, 1), (0, 0)))
    reduced = reduce_unit_square(block)
    assert reduced is not None
    assert not contains_unit_square(reduced)[0]
    assert reduce_unit_square(ring3()) is None


# -- rays and closure ------------------------------------------------------------


def test_extremal_rays_center_of_ring():
    hits = extremal_rays(ring3(), (1, 1))
    assert hits.quasi_internal
    assert set(hits.hits()) == {(2, 1), (0, 1), (1, 2), (1, 0)}


def test_extremal_rays_far_outside():
    hits = extremal_rays(ring3(), (40, 40))
    assert hits.hits() == [] and not hits.quasi_internal


def test_extremal_rays_three_hits_in_bay():
    # a U-shaped ring with a bay cut into the top edge: a point inside the
    # bay sees the floor and both walls but escapes upward
    from lftop.fixtures import _interpolate

    verts = [(0, 0), (8, 0), (8, 6), (5, 6), (5, 3), (3, 3), (3, 6), (0, 6)]
    curve = DigitalCurve(_interpolate(verts))
    assert is_simple_curve(curve)[0]
    hits = extremal_rays(curve, (4, 5))
    assert len(hits.hits()) == 3 and not hits.quasi_internal
    assert hits.y_plus is None


def test_extremal_rays_rejects_curve_point():
    with pytest.raises(DigitalCurveError):
        extremal_rays(ring3(), (0, 0))


def test_closure_from_center_and_outside():
    r = ring3()
    res = reconstruction_closure(r, (1, 1))
    assert res.ok() and res.points == {(1, 1)}
    out = reconstruction_closure(r, (7, 3))
    assert not out.ok() and out.failure_at is not None


def test_closure_canonical_seed_nonempty():
    c5 = load_curve(rectangle_curve(5, 5))
    pts = c5.point_set()
    y_min = min(p[1] for p in pts)
    x1 = min(p[0] for p in pts if p[1] == y_min)
    res = reconstruction_closure(c5, (x1 + 1, y_min + 1))
    assert res.ok() and len(res.points) == 9


# -- completion --------------------------------------------------------------------


def test_completion_rebuilds_rings():
    for w, h in [(3, 3), (5, 5), (4, 7)]:
        curve = load_curve(rectangle_curve(w, h))
        res = reconstruction_closure(curve, (1, 1))
        assert res.ok()
        assert gamma_completion(curve, res.points) == curve.point_set()


def test_completion_empty_set():
    assert gamma_completion(ring3(), []) == frozenset()


# -- jordan pipeline ------------------------------------------------------------------


def test_ring_decomposition():
    dec = jordan_decomposition(ring3(), margin=2)
    assert dec.interior == {(1, 1)}
    assert dec.component_count == 2
    assert dec.two_components and dec.interior_in_rect and dec.reconstruction_ok
    assert dec.exterior_escapes


def test_interior_independent_of_margin():
    curve = load_curve(rectangle_curve(6, 4))
    interiors = {jordan_decomposition(curve, margin=m).interior for m in (1, 2, 3)}
    assert len(interiors) == 1


def test_twelve_step_rejected_and_three_components():
    c = DigitalCurve(TWELVE_STEP)
    with pytest.raises(NotSimpleCurveError) as e:
        jordan_decomposition(c)
    assert e.value.witness[0] == (0, 0) and e.value.witness[1] == (1, 1)
    count, comps, _ = box_components(c, 1)
    assert count == 3
    assert sorted(len(x) for x in comps)[:2] == [1, 1]


def test_block_curve_rejected_for_unit_square():
    block = DigitalCurve(((0, 0), (1, 0), (1, 1), (0, 1), (0, 0)))
    with pytest.raises(UnitSquareError):
        jordan_decomposition(block)


def test_figure8_family_never_separates_in_two():
    for a in (2, 3, 4):
        for b in (1, 2, 3):
            c = load_curve(figure8_curve(a, b))
            ok, _ = is_simple_curve(c)
            assert not ok
            count, _, _ = box_components(c, 1)
            assert count != 2


def test_corpus_sample_full_pipeline():
    for curve in simple_curve_corpus(20, seed=3):
        dec = jordan_decomposition(curve, margin=1)
        assert dec.two_components
        assert dec.interior_in_rect
        assert dec.reconstruction_ok
        assert dec.exterior_escapes


def test_render_pgm():
    dec = jordan_decomposition(ring3(), margin=1)
    text = render_pgm(ring3(), dec)
    lines = text.splitlines()
    assert lines[0] == "P2" and lines[1] == "5 5"
    assert "1" in text  # the interior cell shows up
