"""
Four-vertex limit shapes from the lozenge hexagon by a facet-wise shear.

The lozenge arctic curve of a hexagon is its inscribed ellipse. The height
function is affine along each of the six arcs between tangency points, so
shearing each arc with the plane of its facet gives the four-vertex arctic
curve: six arcs, each on its own ellipse.
"""
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
import scipy.linalg

from .errors import DegenerateConicError, DomainError, NotCircumscribingError, PoleError, RegionError
from .logger import get_logger
from .models import ModelKind, model_spec
from .regions import FacetPlane, PolygonRegion, facet_planes, validate_region

logger = get_logger()

NULL_TOL = 1e-10
TILDE_N = ((0.0, 0.0), (-1.0, 0.0), (-0.5, 0.5))


@dataclass(frozen=True)
class Conic:
    """Projective conic [x y 1] M [x y 1]^T = 0, M symmetric with unit Frobenius norm."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        m = 0.5 * (m + m.T)
        norm = np.linalg.norm(m)
        if norm == 0:
            raise DegenerateConicError("Zero conic matrix")
        m = m / norm
        # orient so the quadratic part is positive on ellipses
        if np.trace(m[:2, :2]) < 0:
            m = -m
        object.__setattr__(self, "matrix", m)

    @property
    def quadratic(self) -> np.ndarray:
        return self.matrix[:2, :2]

    def value(self, x, y):
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        m = self.matrix
        return m[0, 0] * x * x + 2 * m[0, 1] * x * y + m[1, 1] * y * y + 2 * m[0, 2] * x + 2 * m[1, 2] * y + m[2, 2]

    @property
    def center(self) -> np.ndarray:
        return np.linalg.solve(self.quadratic, -self.matrix[:2, 2])

    def _level(self) -> float:
        """Value of the form at the center; negative inside a real ellipse."""
        return float(self.matrix[:2, 2] @ self.center + self.matrix[2, 2])

    @property
    def is_ellipse(self) -> bool:
        return np.linalg.det(self.quadratic) > 0 and self._level() < 0

    def semi_axes(self) -> Tuple[float, float]:
        eig = np.linalg.eigvalsh(self.quadratic)
        return tuple(float(math.sqrt(-self._level() / lam)) for lam in eig)

    def _frame(self) -> np.ndarray:
        """A with center + A (cos phi, sin phi) tracing the ellipse counterclockwise."""
        lam, vec = np.linalg.eigh(self.quadratic)
        if np.linalg.det(vec) < 0:
            vec[:, 1] = -vec[:, 1]
        return vec @ np.diag(np.sqrt(-self._level() / lam))

    def point_at(self, phi) -> np.ndarray:
        phi = np.atleast_1d(np.asarray(phi, dtype=float))
        return self.center + (self._frame() @ np.vstack([np.cos(phi), np.sin(phi)])).T

    def angle_of(self, point: Sequence[float]) -> float:
        local = np.linalg.solve(self._frame(), np.asarray(point, dtype=float) - self.center)
        return float(math.atan2(local[1], local[0]))

    def dual(self) -> np.ndarray:
        return np.linalg.inv(self.matrix)


def _line_row(line: np.ndarray) -> np.ndarray:
    l1, l2, l3 = line
    return np.array([l1 * l1, 2 * l1 * l2, 2 * l1 * l3, l2 * l2, 2 * l2 * l3, l3 * l3])


def conic_from_tangent_lines(lines: Sequence[Sequence[float]], tol: float = NULL_TOL) -> Conic:
    """
    The conic tangent to the given lines a x + b y + c = 0 (at least five).

    The dual conic is the null vector of the line-coordinate system; a sixth
    line must be consistent with it to within tol.
    """
    lines = np.array([np.asarray(l, dtype=float) / math.hypot(l[0], l[1]) for l in lines])
    if len(lines) < 5:
        raise DegenerateConicError(f"Need at least five tangent lines, got {len(lines)}")
    system = np.array([_line_row(l) for l in lines])
    _, sing, vt = scipy.linalg.svd(system)
    sing = np.concatenate([sing, np.zeros(6 - len(sing))])
    if len(lines) > 5 and sing[5] > tol * sing[0]:
        raise NotCircumscribingError(f"Lines are not tangent to a common conic (residual {sing[5] / sing[0]:.3e})")
    if sing[4] <= tol * sing[0]:
        raise DegenerateConicError("Tangent lines do not determine a unique conic")
    d11, d12, d13, d22, d23, d33 = vt[-1]
    dual = np.array([[d11, d12, d13], [d12, d22, d23], [d13, d23, d33]])
    if abs(np.linalg.det(dual)) < tol * np.linalg.norm(dual) ** 3:
        raise DegenerateConicError("Dual conic is singular (lines through a common point pair)")
    conic = Conic(np.linalg.inv(dual))
    if not conic.is_ellipse:
        raise DegenerateConicError("Tangent lines envelope a parabola or hyperbola, not an ellipse")
    return conic


def fit_conic(points: np.ndarray) -> Tuple[Conic, float]:
    """
    Least-squares conic through points, with the fit residual.

    The fit runs in centred, unit-scaled coordinates; the residual is the
    largest algebraic distance there for the unit coefficient vector.
    """
    pts = np.asarray(points, dtype=float)
    shift = pts.mean(axis=0)
    scale = float(np.max(np.abs(pts - shift))) or 1.0
    x, y = ((pts - shift) / scale).T
    design = np.column_stack([x * x, x * y, y * y, x, y, np.ones_like(x)])
    coeffs = scipy.linalg.svd(design)[2][-1]
    residual = float(np.max(np.abs(design @ coeffs)))
    a, b, c, d, e, f = coeffs
    local = np.array([[a, b / 2, d / 2], [b / 2, c, e / 2], [d / 2, e / 2, f]])
    # back to the original coordinates: p_local = T p
    transform = np.array([[1 / scale, 0, -shift[0] / scale], [0, 1 / scale, -shift[1] / scale], [0, 0, 1]])
    return Conic(transform.T @ local @ transform), residual


@dataclass(frozen=True)
class Hexagon:
    """Boxed plane partition hexagon with vertices (0,0),(0,a),(b,a),(b+c,a-c),(b+c,-c),(c,-c)."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 0:
            raise RegionError(f"Hexagon sides must be non-negative, got {(self.a, self.b, self.c)}")

    @property
    def region(self) -> PolygonRegion:
        diagonal = math.sqrt(2.0) * self.c
        return PolygonRegion.from_lengths(
            model_spec(ModelKind.LOZENGE),
            [self.a, self.b, diagonal, self.a, self.b, diagonal],
            family="lozenge_hexagon",
            params={"a": self.a, "b": self.b, "c": self.c},
        )

    @property
    def vertices(self) -> List[Tuple[float, float]]:
        a, b, c = self.a, self.b, self.c
        return [(0.0, 0.0), (0.0, a), (b, a), (b + c, a - c), (b + c, -c), (c, -c)]

    def lines(self) -> List[np.ndarray]:
        """Side lines n . p = n . start with unit normals, side i running from vertex i."""
        out = []
        for (px, py), (dx, dy) in zip(self.vertices, self.region.model.side_directions):
            nx, ny = dy, -dx
            out.append(np.array([nx, ny, -(nx * px + ny * py)]))
        return out


def inscribed_conic(hexagon: Hexagon) -> Conic:
    conic = conic_from_tangent_lines(hexagon.lines())
    logger.debug(f"Inscribed ellipse center {conic.center}, semi-axes {conic.semi_axes()}")
    return conic


def lozenge_facets(hexagon: Hexagon) -> List[FacetPlane]:
    """Six lozenge facet planes, slopes cycling (-1,0), (0,0), (0,1) twice."""
    return facet_planes(validate_region(hexagon.region))


def tangency_points(conic: Conic, lines: Sequence[np.ndarray]) -> List[np.ndarray]:
    """Point of contact of each tangent line: the dual conic applied to the line."""
    dual = conic.dual()
    points = []
    for line in lines:
        p = dual @ line
        points.append(p[:2] / p[2])
    return points


def shear3d(point: Sequence[float]) -> Tuple[float, float, float]:
    x, y, h = point
    return x, y - x - h, h


def unshear3d(point: Sequence[float]) -> Tuple[float, float, float]:
    x, y, h = point
    return x, y + x + h, h


def slope_map(s: float, t: float) -> Tuple[float, float]:
    """Lozenge slopes to four-vertex slopes: ((s - t)/(1 + t), t/(1 + t))."""
    if 1 + t == 0:
        raise PoleError("slope_map has a pole at t = -1")
    return (s - t) / (1 + t), t / (1 + t)


def inverse_slope_map(s_tilde: float, t_tilde: float) -> Tuple[float, float]:
    if 1 - t_tilde == 0:
        raise PoleError("inverse_slope_map has a pole at t~ = 1")
    return (s_tilde + t_tilde) / (1 - t_tilde), t_tilde / (1 - t_tilde)


def sigma_transform(sigma_val: float, s: float, t: float) -> float:
    """Four-vertex surface tension at slope_map(s, t), given the lozenge one at (s, t)."""
    if t <= -1:
        raise DomainError(f"sigma_transform needs t > -1, got {t}")
    return sigma_val / (1 + t)


def kappa_of_t(t: float) -> float:
    """kappa = pi (1 + t)^2; its square root is affine in t."""
    if not 0 <= t <= 1:
        raise DomainError(f"t must lie in [0, 1], got {t}")
    return math.pi * (1 + t) ** 2


def boundary_graph(hexagon: Hexagon) -> List[Tuple[float, float, float]]:
    """Corners of the hexagon with their boundary heights, starting at the anchor corner."""
    facets = lozenge_facets(hexagon)
    # corner i ends side i and carries facet F_{i+1}
    return [(x, y, facets[i % 6].height(x, y)) for i, (x, y) in enumerate(hexagon.vertices)]


@dataclass
class FourVertexArc:
    facet: FacetPlane
    lozenge: np.ndarray
    points: np.ndarray


def fourvertex_arctic(hexagon: Hexagon, samples_per_arc: int = 64) -> List[FourVertexArc]:
    """
    Six arcs of the four-vertex arctic curve, in clockwise order.

    The arc between the tangency points on sides i and i+1 belongs to facet
    F_{i+1}; its lozenge points are lifted to that facet plane and unsheared.
    """
    conic = inscribed_conic(hexagon)
    facets = lozenge_facets(hexagon)
    touch = tangency_points(conic, hexagon.lines())
    angles = [conic.angle_of(p) for p in touch]
    arcs = []
    for i in range(6):
        start, end = angles[i], angles[(i + 1) % 6]
        # clockwise traversal decreases the ellipse angle
        span = (start - end) % (2 * math.pi)
        phi = start - span * np.linspace(0.0, 1.0, samples_per_arc)
        flat = conic.point_at(phi)
        facet = facets[(i + 1) % 6]
        lifted = np.column_stack([flat, facet.s * flat[:, 0] + facet.t * flat[:, 1] + facet.c])
        sheared = np.array([unshear3d(p) for p in lifted])
        arcs.append(FourVertexArc(facet, lifted, sheared))
    return arcs


def winding_number(curve: np.ndarray, point: Sequence[float]) -> float:
    """Winding number of the closed polyline curve (N x 2) around point."""
    rel = np.asarray(curve, dtype=float)[:, :2] - np.asarray(point, dtype=float)
    angles = np.arctan2(rel[:, 1], rel[:, 0])
    steps = np.diff(np.concatenate([angles, angles[:1]]))
    steps = (steps + math.pi) % (2 * math.pi) - math.pi
    return float(steps.sum() / (2 * math.pi))
