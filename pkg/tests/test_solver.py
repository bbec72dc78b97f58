import math

import numpy as np
import pytest

from limitshape.errors import (
    ConvergenceError,
    CriticalPointError,
    DegenerateMapError,
    DomainError,
    InfeasibleRegionError,
    RegionError,
)
from limitshape.hplane import AT_INFINITY, Mobius
from limitshape.models import ModelKind, model_spec
from limitshape.regions import PolygonRegion, aztec_region, fv_hexagon_region, octagon_region
from limitshape.solver import (
    RationalMap,
    _damped_newton,
    _DominoChart,
    _spread_start,
    closed_form_fv_hexagon,
    closed_form_octagon,
    critical_points,
    domino_map,
    fv_map,
    octagon_feasibility,
    octagon_prefactor,
    regauge,
    residuals,
    rmap_deriv,
    rmap_eval,
    solve_parameters,
    unknown_count,
)

SQRT2 = math.sqrt(2.0)


def assert_anchors_close(actual, expected, tol):
    assert len(actual) == len(expected)
    for a, b in zip(actual, expected):
        if math.isinf(b):
            assert math.isinf(a)
        else:
            assert a == pytest.approx(b, abs=tol)


def test_identity_map():
    identity = RationalMap(1.0, (0.0,), (math.inf,))
    assert identity.degree == 1
    assert rmap_eval(identity, 3 + 1j) == 3 + 1j
    assert rmap_deriv(identity, 3 + 1j) == 1
    assert critical_points(identity) == []
    assert identity.maps_half_plane(1)


def test_square_map_critical_point():
    square = RationalMap(1.0, (0.0, 0.0))
    points = critical_points(square)
    assert len(points) == 1
    assert abs(points[0]) < 1e-15


def test_constant_map_has_no_critical_points():
    with pytest.raises(DegenerateMapError):
        critical_points(RationalMap(2.0))
    with pytest.raises(DegenerateMapError):
        RationalMap(0.0, (1.0,))


def test_poles_are_projective():
    rmap = RationalMap(1.0, (), (2.0,))
    assert rmap_eval(rmap, 2.0) is AT_INFINITY
    assert rmap_deriv(rmap, 2.0) is AT_INFINITY
    assert rmap_eval(RationalMap(1.0, (0.0, 1.0)), math.inf) is AT_INFINITY


def test_derivative_matches_finite_difference():
    rmap = RationalMap(-0.7, (1.0, -3.0), (-1.0, 2.5))
    u, h = 0.3 + 0.9j, 1e-6
    fd = (rmap_eval(rmap, u + h) - rmap_eval(rmap, u - h)) / (2 * h)
    assert rmap_deriv(rmap, u) == pytest.approx(fd, rel=1e-8)


def test_octagon_closed_form_values():
    a = closed_form_octagon(0.5, 0.25)
    expected = (0.0, -1.0, -SQRT2, -(1 + SQRT2) * 5 / 6, -12 + 6 * SQRT2, -5.0, -5 * SQRT2, math.inf)
    assert_anchors_close(a, expected, 1e-12)


def test_octagon_prefactor_sends_zero_to_minus_one():
    a = closed_form_octagon(0.5, 0.25)
    z = rmap_eval(domino_map(a, octagon_prefactor(a)), 0.0)
    assert z == pytest.approx(-1.0, abs=1e-14)


def test_octagon_closed_form_poles():
    with pytest.raises(DegenerateMapError):
        closed_form_octagon(0.3, 0.3)


def test_octagon_closed_form_ordered_for_other_parameters():
    a = closed_form_octagon(0.8, 0.1)
    finite = a[:-1]
    assert all(x > y for x, y in zip(finite, finite[1:]))


def test_fv_closed_form_values():
    a = closed_form_fv_hexagon(1.0)
    assert a[1] == pytest.approx(-0.485492, abs=1e-6)
    assert a[2] == pytest.approx(-0.686590, abs=1e-6)
    assert a[3] == pytest.approx(-0.879060, abs=1e-6)
    assert a[4] == pytest.approx(1 / a[3])
    assert a[5] == pytest.approx(1 / a[2])
    assert a[6] == pytest.approx(1 / a[1])
    assert math.isinf(a[7])


@pytest.mark.parametrize("m", [0.25, 1.0, 4.0])
def test_fv_closed_form_symmetry_and_order(m):
    a = closed_form_fv_hexagon(m)
    assert a[2] == pytest.approx((a[1] - a[3]) / (a[1] * a[3] - 1), abs=1e-12)
    finite = a[:-1]
    assert all(x > y for x, y in zip(finite, finite[1:]))


def test_fv_closed_form_domain():
    with pytest.raises(DomainError):
        closed_form_fv_hexagon(0.0)


def test_fv_map_at_infinity():
    a = closed_form_fv_hexagon(1.0)
    assert rmap_eval(fv_map(a), math.inf) == -1


def test_residuals_vanish_on_closed_forms():
    a = closed_form_octagon(0.5, 0.25)
    r = residuals(a, octagon_prefactor(a), octagon_region(0.5, 0.25))
    # 2n z-value conditions and 2n - 2 critical-point conditions for n = 2
    assert r.shape == (6,)
    assert np.linalg.norm(r) < 1e-10
    fv = closed_form_fv_hexagon(1.0)
    assert np.linalg.norm(residuals(fv, -1.0, fv_hexagon_region(1.0))) < 1e-10


def test_residuals_report_order_violation():
    a = list(closed_form_octagon(0.5, 0.25))
    a[1], a[2] = a[2], a[1]
    with pytest.raises(InfeasibleRegionError) as info:
        residuals(a, 1.0, octagon_region(0.5, 0.25))
    assert info.value.violation == (2, 3)


def test_aztec_trivial_solve(aztec_shape):
    assert aztec_shape.rmap.degree == 1
    assert aztec_shape.iterations == 0
    assert_anchors_close(aztec_shape.anchors, (-1.0, math.inf, 1.0, 0.0), 0.0)
    assert aztec_shape.residual_norm < 1e-12


def test_octagon_solve_matches_closed_form(octagon_shape):
    assert_anchors_close(octagon_shape.anchors, closed_form_octagon(0.5, 0.25), 1e-9)
    assert octagon_shape.residual_norm < 1e-10
    assert octagon_shape.rmap.B == pytest.approx(octagon_prefactor(closed_form_octagon(0.5, 0.25)), abs=1e-9)


def test_critical_residuals_at_critical_points(octagon_shape, fv_shape):
    for shape in (octagon_shape, fv_shape):
        assert shape.critical_points
        assert max(shape.critical_residuals()) < 1e-9


def test_octagon_solve_by_continuation():
    shape = solve_parameters(octagon_region(0.8, 0.1))
    assert_anchors_close(shape.anchors, closed_form_octagon(0.8, 0.1), 1e-9)


def test_fv_solve_matches_closed_form(fv_shape):
    assert_anchors_close(fv_shape.anchors, closed_form_fv_hexagon(1.0), 1e-9)
    assert fv_shape.model.kind is ModelKind.FIVE_VERTEX


def test_fv_anchors_do_not_depend_on_r(fv_shape):
    other = solve_parameters(fv_hexagon_region(1.0, r=3.0))
    assert_anchors_close(other.anchors, fv_shape.anchors, 1e-10)


def test_fv_solve_by_continuation():
    shape = solve_parameters(fv_hexagon_region(2.0))
    assert_anchors_close(shape.anchors, closed_form_fv_hexagon(2.0), 1e-9)


@pytest.mark.parametrize("region,closed", [
    (octagon_region(0.5, 0.25), closed_form_octagon(0.5, 0.25)),
    (fv_hexagon_region(1.0), closed_form_fv_hexagon(1.0)),
])
def test_recovers_from_perturbed_start(region, closed):
    perturbed = [a if a == 0 or math.isinf(a) else a * (1 + 0.01 * (-1) ** i) for i, a in enumerate(closed)]
    B = octagon_prefactor(closed) * 1.01 if region.model.kind is ModelKind.DOMINO else -1.0
    shape = solve_parameters(region, init=(perturbed, B))
    assert_anchors_close(shape.anchors, closed, 1e-9)


def test_round_trip_takes_no_iterations(octagon_shape):
    again = solve_parameters(octagon_shape.region, init=(octagon_shape.anchors, octagon_shape.rmap.B))
    assert again.iterations == 0
    assert again.anchors == octagon_shape.anchors


def test_gauge_invariance():
    a = closed_form_octagon(0.5, 0.25)
    m = Mobius(2.0, 1.0, 1.0, 3.0)
    moved = [m(x) for x in a]
    assert_anchors_close(regauge(moved, ModelKind.DOMINO), a, 1e-10)
    fv = closed_form_fv_hexagon(1.0)
    moved = [m(x) for x in fv]
    assert_anchors_close(regauge(moved, ModelKind.FIVE_VERTEX), fv, 1e-10)


def test_feasibility_inequality():
    with pytest.raises(InfeasibleRegionError) as info:
        octagon_feasibility(0.9, 0.05)
    assert "0.417157" in str(info.value)
    assert octagon_feasibility(0.8, 0.1) < 0.1
    assert octagon_feasibility(0.2, -2.0) < -2.0
    with pytest.raises(InfeasibleRegionError):
        octagon_feasibility(0.2, 0.3)


def test_solve_rejects_infeasible_octagon():
    with pytest.raises(InfeasibleRegionError):
        solve_parameters(octagon_region(0.9, 0.3))


def test_solve_rejects_models_without_parameter_problem():
    from limitshape.fourvertex import Hexagon

    with pytest.raises(RegionError):
        solve_parameters(Hexagon(1.0, 1.0, 1.0).region)


def test_solve_accepts_scaled_aztec():
    shape = solve_parameters(aztec_region(2.0))
    assert shape.rmap.degree == 1
    assert [float(f.c) for f in shape.tables.facets] == [0.0, 0.0, -2.0, 0.0]


# square with staircase notches at two corners, balanced but without symmetry
NOTCHED_12 = [0.7, 0.5, 0.25, -0.1, -0.15, 0.4, 0.6, 0.6, 0.1, -0.25, -0.2, 0.15]
NOTCHED_12_ANCHORS = (
    0.0, -1.0, -1.45107, -1.97475, -2.45711, -2.68399, -2.89234, -3.39309, -4.47869, -5.42479, -6.93835, math.inf,
)
STAIRCASE_12 = [2, 0.5, 0.5, -0.5, -0.5, 0.5, 0.5, -0.5, -0.25, 0.25, 0.25, 2.25]


def domino_polygon(lengths):
    return PolygonRegion.from_lengths(model_spec(ModelKind.DOMINO), lengths)


def test_generic_twelve_gon_solves():
    shape = solve_parameters(domino_polygon(NOTCHED_12))
    assert shape.rmap.degree == 3
    assert shape.residual_norm < 1e-10
    assert_anchors_close(shape.anchors, NOTCHED_12_ANCHORS, 1e-4)
    assert shape.rmap.B == pytest.approx(-2.172978, abs=1e-5)
    assert len(shape.critical_points) == 2
    assert max(shape.critical_residuals()) < 1e-9


def test_staircase_twelve_gon_fails_cleanly():
    # anchors separate without bound along any path towards this region
    with pytest.raises(ConvergenceError) as info:
        solve_parameters(domino_polygon(STAIRCASE_12))
    assert "spread start" in str(info.value)
    assert info.value.residual_norm > 1e-6


@pytest.mark.parametrize("n", [2, 3])
def test_residual_count_matches_unknowns(n, octagon_shape):
    if n == 2:
        poly, anchors, B = octagon_shape.region, octagon_shape.anchors, octagon_shape.rmap.B
    else:
        poly = domino_polygon(NOTCHED_12)
        anchors, B = _spread_start(4 * n)
    assert unknown_count(poly, 4 * n) == 4 * n - 2
    assert residuals(anchors, B, poly).shape == (4 * n - 2,)
    assert _DominoChart(4 * n).from_anchors(anchors, B).shape == (4 * n - 2,)


def test_fv_residual_count():
    poly = fv_hexagon_region(1.0)
    assert unknown_count(poly, 8) == 5
    assert residuals(closed_form_fv_hexagon(1.0), -1.0, poly).shape == (5,)


def test_lost_critical_point_raises(monkeypatch):
    import limitshape.solver as solver

    a = closed_form_octagon(0.5, 0.25)
    monkeypatch.setattr(solver, "half_plane_critical_points", lambda rmap, half_plane=1: [])
    with pytest.raises(CriticalPointError):
        residuals(a, octagon_prefactor(a), octagon_region(0.5, 0.25))


def test_newton_wraps_undefined_jacobian():
    def fun(p):
        if p[0] > 0.5:
            raise CriticalPointError("critical point on the real line")
        return np.array([p[0] - 2.0])

    with pytest.raises(ConvergenceError) as info:
        _damped_newton(fun, np.array([0.5 - 1e-9]), 1e-12, 10)
    assert "Jacobian undefined" in str(info.value)
    assert info.value.iterations == 0
