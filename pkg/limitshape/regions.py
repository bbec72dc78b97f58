"""
Polygonal domains with cyclically labelled sides.

Corners, balance, facet tangent planes obtained by walking the boundary
clockwise, and the piecewise-constant boundary tables of s, t, c (and theta,
G for the five-vertex model) that feed the harmonic extensions.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    AnchorCountError,
    ClosureError,
    DirectionError,
    DomainError,
    ImbalanceError,
    InfeasibleRegionError,
    LabelCycleError,
    OrientationError,
    RegionError,
    UndefinedBoundaryPointError,
)
from .hplane import BoundaryData, _arc_contains, _circle_angle
from .logger import get_logger
from .models import ModelKind, ModelSpec, model_spec

logger = get_logger()

GEOMETRY_TOL = 1e-12


def _exact(v):
    """Keep integers and half-integers exact so rational side lengths stay rational."""
    if isinstance(v, (int, Fraction)):
        return v
    if float(v).is_integer():
        return int(v)
    if float(2 * v).is_integer():
        return Fraction(v)
    return v


@dataclass(frozen=True)
class Side:
    type_label: int
    length: float
    direction: Tuple[float, float]


@dataclass(frozen=True)
class FacetPlane:
    """The plane h = s x + t y + c of a frozen facet; index is 1-based in clockwise order."""

    s: float
    t: float
    c: float
    index: int
    after_side: Optional[int] = None

    @property
    def slope(self) -> Tuple[float, float]:
        return float(self.s), float(self.t)

    def height(self, x: float, y: float) -> float:
        return self.s * x + self.t * y + self.c


@dataclass(frozen=True)
class PolygonRegion:
    """
    A region whose sides are walked clockwise from the anchor corner (0, 0).

    family/params name the parametrised family a region was built from (for
    example "octagon" with m1, m2); the solver uses them for closed-form starts
    and feasibility checks.
    """

    model: ModelSpec
    sides: Tuple[Side, ...]
    family: Optional[str] = None
    params: Dict[str, float] = field(default_factory=dict, compare=False)

    @classmethod
    def from_lengths(cls, model: ModelSpec, lengths: Sequence[float], family=None, params=None) -> "PolygonRegion":
        """Sides typed 1, 2, ..., k cyclically, directions taken from the model."""
        k = model.side_type_count
        if k == 0:
            raise RegionError(f"Model {model.kind.value} has no polygonal side types")
        sides = tuple(
            Side(i % k + 1, length, model.side_directions[i % k]) for i, length in enumerate(lengths)
        )
        return cls(model, sides, family, dict(params or {}))

    @classmethod
    def from_typed_sides(cls, model: ModelSpec, typed: Sequence[Tuple[int, float]]) -> "PolygonRegion":
        """Sides given as (type, length) pairs; directions come from the type."""
        sides = []
        for label, length in typed:
            label = int(label)
            if not 1 <= label <= model.side_type_count:
                raise LabelCycleError(f"Side type {label} is not one of 1..{model.side_type_count}")
            sides.append(Side(label, length, model.side_directions[label - 1]))
        return cls(model, tuple(sides))

    @property
    def corners(self) -> List[Tuple[float, float]]:
        """Corner coordinates, starting and (for a closed region) ending at the anchor corner."""
        x, y = 0, 0
        points = [(x, y)]
        for side in self.sides:
            dx, dy = (_exact(v) for v in side.direction)
            x, y = x + _exact(side.length) * dx, y + _exact(side.length) * dy
            points.append((x, y))
        return points

    def signed_area(self) -> float:
        pts = self.corners
        return 0.5 * sum(float(x1) * float(y2) - float(x2) * float(y1) for (x1, y1), (x2, y2) in zip(pts, pts[1:]))

    def side_line(self, i: int) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        """(start corner, direction) of the 0-based side i."""
        return tuple(float(v) for v in self.corners[i]), self.sides[i].direction

    def anchor_count(self) -> int:
        return sum(2 if s.type_label in self.model.neutral_slopes else 1 for s in self.sides)


def validate_region(poly: PolygonRegion) -> PolygonRegion:
    """Check label cyclicity, side directions, closure and clockwise orientation; raise the first violation."""
    k = poly.model.side_type_count
    if k == 0:
        raise RegionError(f"Model {poly.model.kind.value} has no polygonal regions")
    if not poly.sides or len(poly.sides) % k:
        raise LabelCycleError(f"Expected a positive multiple of {k} sides, got {len(poly.sides)}")
    for i, side in enumerate(poly.sides):
        expected = i % k + 1
        if side.type_label != expected:
            raise LabelCycleError(f"Side {i + 1} has type {side.type_label}, expected {expected}")
        want = poly.model.side_directions[expected - 1]
        if math.dist(side.direction, want) > GEOMETRY_TOL:
            raise DirectionError(f"Side {i + 1} of type {expected} points along {side.direction}, expected {want}")
    end = poly.corners[-1]
    if math.hypot(float(end[0]), float(end[1])) > GEOMETRY_TOL:
        raise ClosureError(f"Polygon does not close: last corner is {end}")
    if poly.signed_area() >= 0:
        raise OrientationError("Sides must be traversed clockwise")
    return poly


def _facet_walk(poly: PolygonRegion) -> Tuple[List[FacetPlane], float]:
    """Facet planes from continuity along each side, plus the intercept closure residual."""
    cycle = [tuple(_exact(v) for v in slope) for slope in poly.model.corner_slopes]
    corners = poly.corners
    s, t = cycle[0]
    c = 0
    planes = [FacetPlane(s, t, c, 1)]

    def step(new_slope, px, py):
        nonlocal s, t, c
        ns, nt = new_slope
        c = c + (s - ns) * px + (t - nt) * py
        s, t = ns, nt

    for i, side in enumerate(poly.sides):
        px, py = corners[i]
        neutral = poly.model.neutral_slopes.get(side.type_label)
        if neutral is not None:
            step(tuple(_exact(v) for v in neutral), px, py)
            planes.append(FacetPlane(s, t, c, len(planes) + 1, i + 1))
        step(cycle[(i + 1) % len(cycle)], px, py)
        planes.append(FacetPlane(s, t, c, len(planes) + 1, i + 1))

    closing = planes.pop()
    if (closing.s, closing.t) != (planes[0].s, planes[0].t):
        raise LabelCycleError("Corner slopes do not return to the first facet after a full loop")
    return planes, closing.c - planes[0].c


def balance_check(poly: PolygonRegion) -> float:
    """
    Signed balance residual; 0 for a balanced region.

    Domino: total type-2 length minus total type-3 length. Other models: the
    facet intercept closure residual.
    """
    if poly.model.kind is ModelKind.DOMINO:
        total = 0
        for side in poly.sides:
            if side.type_label == 2:
                total += _exact(side.length)
            elif side.type_label == 3:
                total -= _exact(side.length)
        return total
    return _facet_walk(poly)[1]


def facet_planes(poly: PolygonRegion) -> List[FacetPlane]:
    planes, residual = _facet_walk(poly)
    if abs(residual) > GEOMETRY_TOL:
        raise ImbalanceError(f"Facet intercepts do not close (residual {float(residual):.3g}); the region is unbalanced")
    return planes


def anchor_order_violation(anchors: Sequence[float]) -> Optional[Tuple[int, int]]:
    """
    First pair (i, i+1) (1-based) breaking the decreasing cyclic order on the extended line, or None.

    A decreasing cyclic sequence has exactly one ascent when read around the circle.
    """
    angles = [_circle_angle(a) for a in anchors]
    k = len(angles)
    ascents = [i for i in range(k) if angles[(i + 1) % k] > angles[i]]
    if len(ascents) <= 1:
        return None
    # the wrap ascent is legitimate; report the first other one
    i = ascents[1] if ascents[0] == angles.index(min(angles)) else ascents[0]
    return i + 1, (i + 1) % k + 1


@dataclass(frozen=True)
class BoundaryTables:
    """
    Piecewise-constant boundary data on the anchor intervals.

    arcs[i] = (start, end, facet) with the facet occupying the upward arc from
    start to end. theta, phi, phi_star and G are present for the five-vertex
    model, where s = phi / theta, t = phi_star / theta and c = G / theta.
    """

    anchors: Tuple[float, ...]
    facets: Tuple[FacetPlane, ...]
    arcs: Tuple[Tuple[float, float, FacetPlane], ...]
    s: BoundaryData
    t: BoundaryData
    c: BoundaryData
    theta: Optional[BoundaryData] = None
    phi: Optional[BoundaryData] = None
    phi_star: Optional[BoundaryData] = None
    G: Optional[BoundaryData] = None

    @property
    def weighted(self) -> bool:
        return self.theta is not None

    def facet_at(self, u: float) -> FacetPlane:
        for start, end, facet in self.arcs:
            if _arc_contains(start, end, u):
                return facet
        raise UndefinedBoundaryPointError(f"Point {u} is an anchor, not inside a facet interval")


def facet_arcs(anchors: Sequence[float], facets: Sequence[FacetPlane]) -> List[Tuple[float, float, FacetPlane]]:
    """F_1 sits on the arc from a_1 up to a_K; F_i (i >= 2) on the arc from a_{K+2-i} up to a_{K+1-i}."""
    k = len(anchors)
    arcs = []
    for f, facet in enumerate(facets, start=1):
        start = anchors[(k + 1 - f) % k]
        end = anchors[k - f]
        arcs.append((float(start), float(end), facet))
    return arcs


def boundary_tables(poly: PolygonRegion, anchors: Sequence[float]) -> BoundaryTables:
    """Assign each facet plane to its anchor interval and build the boundary data."""
    facets = facet_planes(poly)
    anchors = tuple(float(a) for a in anchors)
    if len(anchors) != len(facets):
        raise AnchorCountError(f"Region has {len(facets)} facets but {len(anchors)} anchors were given")
    violation = anchor_order_violation(anchors)
    if violation is not None:
        i, j = violation
        raise InfeasibleRegionError(
            f"Anchors a_{i}={anchors[i - 1]} and a_{j}={anchors[j - 1]} break the cyclic order", violation
        )
    arcs = facet_arcs(anchors, facets)
    hp = poly.model.half_plane

    def data(value):
        return BoundaryData.from_arcs([(a, b, float(value(f))) for a, b, f in arcs], hp)

    tables = dict(
        anchors=anchors,
        facets=tuple(facets),
        arcs=tuple(arcs),
        s=data(lambda f: f.s),
        t=data(lambda f: f.t),
        c=data(lambda f: f.c),
    )
    if poly.model.kind is ModelKind.FIVE_VERTEX:
        theta = poly.model.theta_on
        tables.update(
            theta=data(lambda f: theta(f.slope)),
            phi=data(lambda f: theta(f.slope) * f.s),
            phi_star=data(lambda f: theta(f.slope) * f.t),
            G=data(lambda f: theta(f.slope) * f.c),
        )
    return BoundaryTables(**tables)


def aztec_region(size: float = 1.0) -> PolygonRegion:
    """The Aztec diamond square in the rotated domino coordinates."""
    return PolygonRegion.from_lengths(model_spec(ModelKind.DOMINO), [size] * 4, family="aztec")


def octagon_region(m1: float, m2: float) -> PolygonRegion:
    """Octagon with diagonal symmetry; lengths up, right, down, left, ... clockwise from the origin."""
    bend = m1 + m2 - 1
    lengths = [1, m1, m2, bend, bend, m2, m1, 1]
    return PolygonRegion.from_lengths(
        model_spec(ModelKind.DOMINO), lengths, family="octagon", params={"m1": m1, "m2": m2}
    )


def fv_hexagon_region(m: float, r: Optional[float] = None) -> PolygonRegion:
    """Five-vertex hexagon: unit vertical and horizontal sides, diagonals of length sqrt(2) m."""
    if m <= 0:
        raise DomainError(f"Hexagon parameter m must be positive, got {m}")
    spec = model_spec(ModelKind.FIVE_VERTEX, r)
    diagonal = math.sqrt(2.0) * m
    return PolygonRegion.from_lengths(
        spec, [1, diagonal, 1, 1, diagonal, 1], family="fv_hexagon", params={"m": m, "r": spec.r}
    )
