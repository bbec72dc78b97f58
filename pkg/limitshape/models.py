"""
Model-specific spectral data.

Newton polygons and boundary conventions for the domino, Aztec fortress,
five-vertex and lozenge models; the z <-> w relations and slope maps (s, t);
the five-vertex theta; and the fortress field built from Weierstrass sigma.
"""
import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple

from .elliptic import RectLattice, wsigma, wzeta
from .errors import BoundaryVertexError, DomainError, PoleError
from .hplane import AT_INFINITY
from .logger import get_logger

logger = get_logger()

Point = Tuple[float, float]

BRANCH_TOL = 1e-14
LATTICE_TOL = 1e-12
_SQRT_HALF = math.sqrt(0.5)


class ModelKind(str, Enum):
    DOMINO = "domino"
    FORTRESS = "fortress"
    FIVE_VERTEX = "fivevertex"
    LOZENGE = "lozenge"


@dataclass(frozen=True)
class ModelSpec:
    """
    Static description of a model.

    side_directions are the clockwise unit directions of side types 1, 2, ...;
    corner_slopes is the cycle of facet slopes met walking clockwise from the
    anchor corner; neutral_slopes maps a side type to the slope of the extra
    facet sitting between its two tangency points.
    """

    kind: ModelKind
    newton_polygon: Tuple[Point, ...]
    side_directions: Tuple[Point, ...]
    corner_slopes: Tuple[Point, ...]
    neutral_slopes: Dict[int, Point] = field(default_factory=dict)
    half_plane: int = 1
    orientation: int = -1
    r: Optional[float] = None

    @property
    def side_type_count(self) -> int:
        return len(self.side_directions)

    def theta_on(self, slope: Point) -> float:
        """Boundary value of theta on a facet: 2 pi on neutral facets, pi otherwise."""
        if self.kind is not ModelKind.FIVE_VERTEX:
            return 1.0
        return 2.0 * math.pi if slope in self.neutral_slopes.values() else math.pi


def model_spec(kind, r: Optional[float] = None) -> ModelSpec:
    """Build the ModelSpec for a model name or ModelKind."""
    kind = ModelKind(kind)
    if kind is ModelKind.DOMINO:
        return ModelSpec(
            kind=kind,
            newton_polygon=((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)),
            side_directions=((0.0, 1.0), (1.0, 0.0), (0.0, -1.0), (-1.0, 0.0)),
            corner_slopes=((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)),
            half_plane=1,
            orientation=-1,
        )
    if kind is ModelKind.FORTRESS:
        return ModelSpec(
            kind=kind,
            newton_polygon=((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)),
            side_directions=(),
            corner_slopes=((1.0, 0.0), (0.0, -1.0), (-1.0, 0.0), (0.0, 1.0)),
            half_plane=0,
            orientation=-1,
        )
    if kind is ModelKind.FIVE_VERTEX:
        if r is None:
            r = math.sqrt(2.0)
        if r <= 1:
            raise DomainError(f"Five-vertex weight must satisfy r > 1, got {r}")
        return ModelSpec(
            kind=kind,
            newton_polygon=((0.0, 0.0), (1.0, 0.0), (0.0, 1.0)),
            side_directions=(
                (0.0, 1.0), (_SQRT_HALF, _SQRT_HALF), (1.0, 0.0),
                (0.0, -1.0), (-_SQRT_HALF, -_SQRT_HALF), (-1.0, 0.0),
            ),
            corner_slopes=((0.0, 0.0), (1.0, 0.0), (0.0, 1.0)),
            neutral_slopes={2: (0.5, 0.5), 5: (0.5, 0.5)},
            half_plane=-1,
            orientation=1,
            r=float(r),
        )
    return ModelSpec(
        kind=kind,
        newton_polygon=((0.0, 0.0), (-1.0, 0.0), (0.0, 1.0)),
        side_directions=(
            (0.0, 1.0), (1.0, 0.0), (_SQRT_HALF, -_SQRT_HALF),
            (0.0, -1.0), (-1.0, 0.0), (-_SQRT_HALF, _SQRT_HALF),
        ),
        corner_slopes=((-1.0, 0.0), (0.0, 0.0), (0.0, 1.0)),
        half_plane=1,
        orientation=-1,
    )


def _arg_upper(x: complex) -> float:
    """Argument in [0, pi] for a point of the closed upper half-plane."""
    x = complex(x)
    if x.imag == 0.0:
        return math.pi if x.real < 0 else 0.0
    return cmath.phase(x)


def _arg_lower(x: complex) -> float:
    """Argument in [-pi, 0] for a point of the closed lower half-plane."""
    x = complex(x)
    if x.imag == 0.0:
        return -math.pi if x.real < 0 else 0.0
    return cmath.phase(x)


def _check_branch_points(z: complex, points, label: str):
    for p in points:
        if abs(z - p) < BRANCH_TOL:
            raise BoundaryVertexError(f"{label}: z={z} is a branch point")


# --- Domino -----------------------------------------------------------------

def domino_spectral(z: complex, w: complex) -> complex:
    """P(z, w) = 1 + z + w - z w."""
    return 1 + z + w - z * w


def domino_w_of_z(z: complex) -> complex:
    """w = (z + 1) / (z - 1), the second intrinsic coordinate."""
    z = complex(z)
    if abs(z - 1) < BRANCH_TOL:
        raise PoleError("w has a pole at z = 1")
    return (z + 1) / (z - 1)


def domino_slopes(z: complex) -> Tuple[float, float]:
    """(s, t) = ((pi - arg z) / pi, (pi + arg w) / pi) for z in the closed upper half-plane."""
    z = complex(z)
    if z.imag < 0:
        raise DomainError(f"Domino slopes need z in the closed upper half-plane, got {z}")
    if cmath.isinf(z):
        raise BoundaryVertexError("Domino slopes are undefined at z = infinity")
    _check_branch_points(z, (-1.0, 0.0, 1.0), "domino")
    # arg w = Arg(z + 1) - Arg(z - 1) lies in [-pi, 0]
    arg_w = _arg_upper(z + 1) - _arg_upper(z - 1)
    return 1.0 - _arg_upper(z) / math.pi, 1.0 + arg_w / math.pi


# --- Five-vertex ------------------------------------------------------------

def fv_spectral(z: complex, w: complex, r: float) -> complex:
    """P(z, w) = 1 - z - w + (1 - r^2) z w."""
    return 1 - z - w + (1 - r * r) * z * w


def fv_w_of_z(z: complex, r: float):
    """w = (1 - z) / (1 - (1 - r^2) z); AT_INFINITY at the pole."""
    z = complex(z)
    den = 1 - (1 - r * r) * z
    if abs(den) < BRANCH_TOL:
        return AT_INFINITY
    return (1 - z) / den


def fv_theta(z: complex) -> float:
    """theta = 2 pi + Arg(z / (1 - z)), in [pi, 2 pi] on the closed lower half-plane."""
    z = complex(z)
    if z.imag > 0:
        raise DomainError(f"Five-vertex theta needs z in the closed lower half-plane, got {z}")
    _check_branch_points(z, (0.0, 1.0), "five-vertex theta")
    return 2 * math.pi + _arg_lower(z / (1 - z))


def fv_theta_from_w(w: complex) -> float:
    """theta = 2 pi - Arg(w / (1 - w)) for w in the closed upper half-plane."""
    w = complex(w)
    _check_branch_points(w, (0.0, 1.0), "five-vertex theta")
    return 2 * math.pi - _arg_upper(w / (1 - w))


def fv_slopes(z: complex, r: float) -> Tuple[float, float]:
    """(s, t) = ((pi - Arg w) / theta, (pi + Arg z) / theta)."""
    z = complex(z)
    _check_branch_points(z, (0.0, 1.0, 1.0 / (1.0 - r * r)), "five-vertex")
    theta = fv_theta(z)
    w = fv_w_of_z(z, r)
    return (math.pi - _arg_upper(w)) / theta, (math.pi + _arg_lower(z)) / theta


# --- Aztec fortress ---------------------------------------------------------

# sigma shifts in the numerator and denominator of the s and t products
_S_PRODUCT = ((0.0, 0.5), (1.0, 1.5))
_T_PRODUCT = ((-0.5, -2.0), (-1.0, -1.5))
_JUMP_POINTS = (0.0, 0.5, 1.0, 1.5, 2.0)
_BASE_POINT = 0.25 + 0j
_SPINE_HEIGHT = 0.5
_MAX_STEP_PHASE = 0.5
_MAX_BISECTIONS = 40


class FortressField:
    """
    Evaluation context for the tau = 1 fortress field on the annulus [0,2] x (0,1).

    The sigma products are not single-valued factor by factor, so their
    arguments are continued from the base point 1/4 (where both products are
    real and positive) up a vertical tooth to the spine Im z = 1/2, along
    the spine, and down a tooth to the target. Arguments at spine points are
    cached; a context must not be shared between workers.
    """

    def __init__(self, lattice: Optional[RectLattice] = None):
        self.lattice = lattice or RectLattice.square()
        if abs(self.lattice.omega1 - 1.0) > LATTICE_TOL or abs(self.lattice.omega3 - 1j) > LATTICE_TOL:
            raise DomainError("Only the tau = 1 fortress lattice (omega1=1, omega3=i) is supported")
        self._spine_cache: Dict[Tuple[str, float], float] = {}

    def _product(self, which: str, z: complex) -> complex:
        num, den = _S_PRODUCT if which == "s" else _T_PRODUCT
        value = 1 + 0j
        for shift in num:
            value *= wsigma(z + shift, self.lattice)
        for shift in den:
            value /= wsigma(z + shift, self.lattice)
        return value

    def _zeta_sum(self, which: str, z: complex) -> complex:
        num, den = _S_PRODUCT if which == "s" else _T_PRODUCT
        return sum(wzeta(z + s, self.lattice) for s in num) - sum(wzeta(z + s, self.lattice) for s in den)

    def _continue(self, which: str, start: complex, arg0: float, end: complex, depth: int = 0) -> float:
        """Continue arg of the product from start to end along a straight segment."""
        step = cmath.phase(self._product(which, end) / self._product(which, start))
        if abs(step) <= _MAX_STEP_PHASE or depth >= _MAX_BISECTIONS:
            return arg0 + step
        mid = 0.5 * (start + end)
        arg_mid = self._continue(which, start, arg0, mid, depth + 1)
        return self._continue(which, mid, arg_mid, end, depth + 1)

    def _spine_arg(self, which: str, x: float) -> float:
        key = (which, x)
        if key not in self._spine_cache:
            top = complex(_BASE_POINT.real, _SPINE_HEIGHT)
            root_key = (which, _BASE_POINT.real)
            if root_key not in self._spine_cache:
                self._spine_cache[root_key] = self._continue(which, _BASE_POINT, 0.0, top)
            self._spine_cache[key] = self._continue(which, top, self._spine_cache[root_key], complex(x, _SPINE_HEIGHT))
        return self._spine_cache[key]

    def arg(self, which: str, z: complex) -> float:
        """Continuous argument of the s-product ("s") or t-product ("t") at z."""
        z = self._reduce(z)
        spine = complex(z.real, _SPINE_HEIGHT)
        return self._continue(which, spine, self._spine_arg(which, z.real), z)

    def _reduce(self, z: complex) -> complex:
        z = complex(z)
        if not 0.0 < z.imag < 1.0:
            if z.imag == 0.0 and min(abs((z.real % 2.0) - p) for p in _JUMP_POINTS) < BRANCH_TOL:
                raise BoundaryVertexError(f"Fortress field jumps at boundary point {z}")
            raise DomainError(f"Point {z} is outside the open annulus 0 < Im z < 1")
        return complex(z.real % 2.0, z.imag)

    def loop_defect(self, height: float, steps: int = 64) -> float:
        """Change of the s-product argument after one loop around the annulus at a fixed height."""
        start = complex(0.0, height)
        arg = 0.0
        for k in range(steps):
            a = complex(2.0 * k / steps, height)
            b = complex(2.0 * (k + 1) / steps, height)
            arg = self._continue("s", a, arg, b)
        return arg

    def __call__(self, z: complex) -> Tuple[float, float, float]:
        z = self._reduce(z)
        arg_s = self.arg("s", z)
        arg_t = self.arg("t", z)
        s = 1.0 - z.imag / 2.0 - arg_s / math.pi
        t = arg_t / math.pi
        c = 1.0 - z.imag / 2.0 + 2.0 * arg_s / math.pi
        return s, t, c

    def derivatives(self, z: complex) -> Tuple[complex, complex, complex]:
        """(s_z, t_z, c_z) from zeta sums, using d/dz Im f = f' / (2i) for holomorphic f."""
        z = self._reduce(z)
        zs = self._zeta_sum("s", z)
        zt = self._zeta_sum("t", z)
        d_im = 1.0 / 2j
        s_z = -0.5 * d_im - zs / (2j * math.pi)
        t_z = zt / (2j * math.pi)
        c_z = -0.5 * d_im + zs / (1j * math.pi)
        return s_z, t_z, c_z

    def log_derivative_check(self, which: str, z: complex, h: float = 1e-5) -> float:
        """|d/dz log(product) - zeta sum| by a centered difference of the logarithm of a ratio close to 1."""
        z = complex(z)
        fd = cmath.log(self._product(which, z + h) / self._product(which, z - h)) / (2 * h)
        return abs(fd - self._zeta_sum(which, z))


def fortress_field(z: complex, context: Optional[FortressField] = None) -> Tuple[float, float, float]:
    """(s, t, c) of the tau = 1 fortress at z in the open annulus."""
    if context is None:
        context = FortressField()
    return context(z)
