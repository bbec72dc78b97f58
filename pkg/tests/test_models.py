import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from limitshape.elliptic import RectLattice
from limitshape.errors import BoundaryVertexError, DomainError, PoleError
from limitshape.hplane import AT_INFINITY
from limitshape.models import (
    FortressField,
    ModelKind,
    domino_slopes,
    domino_spectral,
    domino_w_of_z,
    fortress_field,
    fv_slopes,
    fv_spectral,
    fv_theta,
    fv_theta_from_w,
    fv_w_of_z,
    model_spec,
)

R = math.sqrt(2.0)

upper = st.builds(complex, st.floats(-20, 20), st.floats(1e-3, 20))


@pytest.fixture(scope="module")
def fortress():
    return FortressField()


def test_model_specs():
    domino = model_spec("domino")
    assert domino.half_plane == 1
    assert set(domino.newton_polygon) == {(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)}
    fv = model_spec(ModelKind.FIVE_VERTEX)
    assert fv.half_plane == -1
    assert fv.r == pytest.approx(R)
    assert fv.side_type_count == 6
    assert model_spec("lozenge").side_type_count == 6
    with pytest.raises(DomainError):
        model_spec("fivevertex", r=1.0)


def test_domino_w_values():
    assert domino_w_of_z(1j) == pytest.approx(-1j, abs=1e-15)
    assert domino_w_of_z(0) == -1
    assert domino_w_of_z(-1) == 0
    with pytest.raises(PoleError):
        domino_w_of_z(1.0)


@given(upper)
def test_domino_spectral_residual(z):
    w = domino_w_of_z(z)
    assert w.imag <= 0
    assert abs(domino_spectral(z, w)) < 1e-13 * max(1.0, abs(z) * abs(w))


def test_domino_slopes_table():
    assert domino_slopes(-0.5) == pytest.approx((0.0, 0.0))
    assert domino_slopes(0.5) == pytest.approx((1.0, 0.0))
    assert domino_slopes(2.0) == pytest.approx((1.0, 1.0))
    assert domino_slopes(-2.0) == pytest.approx((0.0, 1.0))
    assert domino_slopes(1j) == pytest.approx((0.5, 0.5))


def test_domino_slopes_branch_points():
    for z in (-1.0, 0.0, 1.0):
        with pytest.raises(BoundaryVertexError):
            domino_slopes(z)
    with pytest.raises(DomainError):
        domino_slopes(-1j)


@given(upper)
def test_domino_arg_sum_identity(z):
    # arg w = Arg(z + 1) - Arg(z - 1), the circle construction in angle form
    _, t = domino_slopes(z)
    w = domino_w_of_z(z)
    assert math.pi * (t - 1) == pytest.approx(math.atan2(w.imag, w.real), abs=1e-10)


def test_fv_w_values():
    assert fv_w_of_z(-1j, R) == pytest.approx(1j, abs=1e-15)
    assert fv_w_of_z(0, 3.0) == 1
    assert fv_w_of_z(1, 3.0) == 0
    assert fv_w_of_z(-1, R) is AT_INFINITY


@given(st.builds(complex, st.floats(-20, 20), st.floats(-20, -1e-3)), st.floats(1.01, 5))
def test_fv_spectral_residual(z, r):
    w = fv_w_of_z(z, r)
    assert w.imag >= 0
    assert abs(fv_spectral(z, w, r)) < 1e-13 * max(1.0, abs(z) * abs(w) * r * r)


def test_fv_theta_values():
    assert fv_theta(0.5) == pytest.approx(2 * math.pi)
    assert fv_theta(-0.5) == pytest.approx(math.pi)
    assert fv_theta(-1j) == pytest.approx(5 * math.pi / 4)
    with pytest.raises(DomainError):
        fv_theta(1j)
    with pytest.raises(BoundaryVertexError):
        fv_theta(0.0)


@pytest.mark.parametrize("z", [-1j, 0.3 - 0.8j, -2.5 - 0.1j, 4 - 3j])
def test_fv_theta_from_w_agrees(z):
    assert fv_theta_from_w(fv_w_of_z(z, R)) == pytest.approx(fv_theta(z), abs=1e-12)


def test_fv_slopes_values():
    assert fv_slopes(-1j, R) == pytest.approx((0.4, 0.4))
    assert fv_slopes(0.5, R) == pytest.approx((0.5, 0.5))
    assert fv_slopes(-0.5, R) == pytest.approx((1.0, 0.0))


@pytest.mark.parametrize("z", [-1j, 0.3 - 0.8j, -2.5 - 0.1j, 4 - 3j, 0.01 - 5j])
def test_fv_slopes_in_triangle(z):
    s, t = fv_slopes(z, R)
    assert s >= -1e-12 and t >= -1e-12
    assert s + t <= 1 + 1e-12


def test_fv_theta_weights_on_neutral_slope():
    fv = model_spec("fivevertex")
    assert fv.theta_on((0.5, 0.5)) == pytest.approx(2 * math.pi)
    assert fv.theta_on((0.0, 0.0)) == pytest.approx(math.pi)


def test_fortress_lower_boundary_values(fortress):
    eps = 1e-4
    for x, expected in ((0.25, 1.0), (0.75, 0.0), (1.25, -1.0), (1.75, 0.0)):
        s, _, _ = fortress(complex(x, eps))
        assert s == pytest.approx(expected, abs=1e-3)


@pytest.mark.parametrize("x", [0.1, 0.6, 1.3, 1.9])
def test_fortress_upper_boundary_value(fortress, x):
    s, _, _ = fortress(complex(x, 1 - 1e-4))
    assert s == pytest.approx(0.0, abs=1e-3)


def test_fortress_period_two(fortress):
    z = 0.37 + 0.41j
    assert fortress(z + 2) == pytest.approx(fortress(z), abs=1e-10)
    assert abs(fortress.loop_defect(0.5)) < 1e-8


@pytest.mark.parametrize("z", [0.75 + 0.5j, 1.25 + 0.5j, 0.25 + 0.45j])
def test_fortress_components_are_harmonic(fortress, z):
    h = 1e-3
    centre = fortress(z)
    around = [fortress(z + d) for d in (h, -h, 1j * h, -1j * h)]
    for k in range(3):
        stencil = sum(p[k] for p in around) - 4 * centre[k]
        assert abs(stencil) < 1e-6
        assert abs(stencil) / h ** 2 < 1e-4


@pytest.mark.parametrize("which", ["s", "t"])
def test_fortress_zeta_sums(fortress, which):
    assert fortress.log_derivative_check(which, 0.3 + 0.4j) < 1e-7


def test_fortress_derivatives_match_finite_differences(fortress):
    z, h = 0.7 + 0.45j, 1e-5
    s_z, t_z, c_z = fortress.derivatives(z)
    plus, minus = fortress(z + h), fortress(z - h)
    up, down = fortress(z + 1j * h), fortress(z - 1j * h)
    for k, deriv in enumerate((s_z, t_z, c_z)):
        dx = (plus[k] - minus[k]) / (2 * h)
        dy = (up[k] - down[k]) / (2 * h)
        assert deriv == pytest.approx(0.5 * (dx - 1j * dy), abs=1e-6)


def test_fortress_outside_annulus():
    with pytest.raises(DomainError):
        fortress_field(0.5 + 1.5j)
    with pytest.raises(BoundaryVertexError):
        fortress_field(0.5 + 0j)


@pytest.mark.parametrize("omega1,omega3", [(1.0 + 1e-10, 1j), (1.0, 1.00001j), (2.0, 2j)])
def test_fortress_rejects_other_lattices(omega1, omega3):
    with pytest.raises(DomainError):
        FortressField(RectLattice(omega1, omega3))


def test_fortress_accepts_rounded_square_lattice():
    field = FortressField(RectLattice(1.0 + 1e-15, 1j))
    assert field.lattice.omega1 != 1.0
    assert field(0.75 + 0.5j) == pytest.approx(FortressField()(0.75 + 0.5j), abs=1e-12)
