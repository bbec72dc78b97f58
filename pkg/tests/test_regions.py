import math

import pytest

from limitshape.errors import (
    AnchorCountError,
    ClosureError,
    ImbalanceError,
    InfeasibleRegionError,
    LabelCycleError,
    OrientationError,
)
from limitshape.hplane import harmonic_eval
from limitshape.models import domino_slopes, model_spec
from limitshape.regions import (
    PolygonRegion,
    anchor_order_violation,
    aztec_region,
    balance_check,
    boundary_tables,
    facet_planes,
    fv_hexagon_region,
    octagon_region,
    validate_region,
)
from limitshape.solver import closed_form_fv_hexagon, closed_form_octagon

AZTEC_ANCHORS = (-1.0, math.inf, 1.0, 0.0)


def planes_as_tuples(planes):
    return [(float(p.s), float(p.t), float(p.c)) for p in planes]


def typed(model, pairs):
    return PolygonRegion.from_typed_sides(model_spec(model), pairs)


def test_aztec_is_valid():
    region = validate_region(aztec_region())
    assert region.corners[-1] == (0, 0)
    assert region.signed_area() == pytest.approx(-1.0)
    assert region.anchor_count() == 4


def test_octagon_is_valid():
    region = validate_region(octagon_region(0.5, 0.25))
    assert len(region.sides) == 8
    assert [float(x) for x in region.corners[3]] == pytest.approx([0.5, 0.75])


def test_label_cycle_error():
    with pytest.raises(LabelCycleError):
        validate_region(typed("domino", [(1, 1), (3, 1), (2, 1), (4, 1)]))


def test_closure_error():
    with pytest.raises(ClosureError):
        validate_region(PolygonRegion.from_lengths(model_spec("domino"), [1, 2, 1, 1]))


def test_orientation_error():
    # up, left, down, right: counterclockwise
    with pytest.raises(OrientationError):
        validate_region(PolygonRegion.from_lengths(model_spec("domino"), [1, -1, 1, -1]))


def test_balance():
    assert balance_check(aztec_region()) == 0
    assert balance_check(octagon_region(0.5, 0.25)) == 0
    stretched = PolygonRegion.from_lengths(model_spec("domino"), [1, 2, 1, 2])
    assert balance_check(validate_region(stretched)) == 1
    with pytest.raises(ImbalanceError):
        facet_planes(stretched)


def test_aztec_facets():
    assert planes_as_tuples(facet_planes(aztec_region())) == [
        (0, 0, 0), (1, 0, 0), (1, 1, -1), (0, 1, 0),
    ]


@pytest.mark.parametrize("m1,m2", [(0.5, 0.25), (0.8, 0.1), (0.2, -2.0)])
def test_octagon_facets(m1, m2):
    planes = planes_as_tuples(facet_planes(octagon_region(m1, m2)))
    slopes = [(s, t) for s, t, _ in planes]
    assert slopes == [(0, 0), (1, 0), (1, 1), (0, 1)] * 2
    intercepts = [c for _, _, c in planes]
    assert intercepts == pytest.approx([0, 0, -1, m1 - 1, m1 - m2, m1 - 1, -1, 0])


def test_fv_hexagon_facets():
    m = 1.5
    planes = planes_as_tuples(facet_planes(fv_hexagon_region(m)))
    assert [(s, t) for s, t, _ in planes] == [
        (0, 0), (1, 0), (0.5, 0.5), (0, 1), (0, 0), (1, 0), (0.5, 0.5), (0, 1),
    ]
    assert [c for _, _, c in planes] == pytest.approx([0, 0, -0.5, -1, m, -1, -0.5, 0], abs=1e-12)
    assert abs(balance_check(fv_hexagon_region(m))) < 1e-12


def test_facets_agree_along_sides():
    region = octagon_region(0.8, 0.1)
    planes = facet_planes(region)
    corners = [(float(x), float(y)) for x, y in region.corners]
    for i in range(len(region.sides)):
        before, after = planes[i], planes[(i + 1) % len(planes)]
        for x, y in (corners[i], corners[i + 1]):
            assert float(before.height(x, y)) == pytest.approx(float(after.height(x, y)), abs=1e-12)


@pytest.mark.parametrize("region", [aztec_region(), octagon_region(0.5, 0.25), octagon_region(0.8, 0.1)])
def test_boundary_height_monotone_on_sides(region):
    planes = facet_planes(region)
    corners = [(float(x), float(y)) for x, y in region.corners]
    for i, side in enumerate(region.sides):
        plane = planes[(i + 1) % len(planes)]
        (x0, y0), (x1, y1) = corners[i], corners[i + 1]
        rise = float(plane.height(x1, y1)) - float(plane.height(x0, y0))
        if side.type_label in (1, 4):
            assert rise == pytest.approx(0.0, abs=1e-12)
        elif side.type_label == 2:
            # increases rightwards
            assert rise == pytest.approx(x1 - x0, abs=1e-12)
        else:
            # increases upwards, the side runs down
            assert rise == pytest.approx(y1 - y0, abs=1e-12)


def test_anchor_order():
    assert anchor_order_violation(AZTEC_ANCHORS) is None
    assert anchor_order_violation(closed_form_octagon(0.5, 0.25)) is None
    assert anchor_order_violation(closed_form_fv_hexagon(1.0)) is None
    assert anchor_order_violation((0.0, -1.0, -0.5, -2.0)) == (2, 3)


def test_aztec_tables_match_closed_forms():
    tables = boundary_tables(aztec_region(), AZTEC_ANCHORS)
    assert harmonic_eval(tables.c, 1j) == pytest.approx(-0.25, abs=1e-15)
    for z in (1j, 0.3 + 0.2j, -2 + 0.5j):
        s, t = domino_slopes(z)
        assert harmonic_eval(tables.s, z) == pytest.approx(s, abs=1e-14)
        assert harmonic_eval(tables.t, z) == pytest.approx(t, abs=1e-14)
        c = (-math.pi + math.atan2(z.imag, z.real - 1)) / math.pi
        assert harmonic_eval(tables.c, z) == pytest.approx(c, abs=1e-14)


def test_aztec_facet_positions():
    tables = boundary_tables(aztec_region(), AZTEC_ANCHORS)
    assert tables.facet_at(-0.5).index == 1
    assert tables.facet_at(0.5).index == 2
    assert tables.facet_at(5.0).index == 3
    assert tables.facet_at(-5.0).index == 4


def test_fv_tables_are_weighted():
    anchors = closed_form_fv_hexagon(1.0)
    tables = boundary_tables(fv_hexagon_region(1.0), anchors)
    assert tables.weighted
    assert tables.theta.bounds() == pytest.approx((math.pi, 2 * math.pi))
    # G / pi on the facet intervals
    g_over_pi = sorted({round(v / math.pi, 12) for v in tables.G.values})
    assert g_over_pi == pytest.approx([-1.0, 0.0, 1.0])


def test_octagon_tables_reproduce_intercept_formula():
    a = closed_form_octagon(0.5, 0.25)
    tables = boundary_tables(octagon_region(0.5, 0.25), a)
    u = 0.4 + 1.3j

    def arg(w):
        return math.atan2(w.imag, w.real)

    # c is 0 right of a_2; each anchor a_2..a_7 carries the jump (left value - right value)
    jumps = ((1.0, a[6]), (-0.5, a[5]), (-0.75, a[4]), (0.75, a[3]), (0.5, a[2]), (-1.0, a[1]))
    expected = sum(d * arg(u - b) for d, b in jumps) / math.pi
    assert harmonic_eval(tables.c, u) == pytest.approx(expected, abs=1e-12)


def test_anchor_count_and_order_errors():
    with pytest.raises(AnchorCountError):
        boundary_tables(aztec_region(), (-1.0, 1.0, 0.0))
    with pytest.raises(InfeasibleRegionError) as info:
        boundary_tables(aztec_region(), (-1.0, 1.0, math.inf, 0.0))
    assert info.value.violation is not None
