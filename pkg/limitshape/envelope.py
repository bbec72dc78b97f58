"""
Limit shape surface and arctic curve as envelopes.

The surface is the envelope of the tangent planes h = s x + t y + c as the
parameter u runs over the open half-plane (or the fortress annulus); the
arctic curve is the envelope of the tangent lines obtained on the boundary,
where (s, t, c) is frozen at the facet of the current anchor interval.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import scipy.linalg

from .errors import DomainError, LimitShapeError, SingularSystemError
from .hplane import (
    Mobius,
    _circle_angle,
    harmonic_eval,
    holomorphic_deriv,
    holomorphic_deriv2,
    jump_at,
    pushforward,
    regular_deriv_at,
)
from .logger import get_logger
from .models import FortressField, ModelSpec, model_spec
from .regions import BoundaryTables, FacetPlane
from .solver import SolvedShape

logger = get_logger()

COND_LIMIT = 1e12
FACET_TOL = 1e-6
# Distance of the boundary ring from the real line, well inside FACET_TOL
BOUNDARY_OFFSET = 1e-9
Point3 = Tuple[float, float, float]


def _solve(matrix: np.ndarray, rhs: np.ndarray, where) -> np.ndarray:
    """Solve after row scaling; report the condition number when the system is singular."""
    scale = np.linalg.norm(matrix, axis=1)
    if np.any(scale == 0) or not np.all(np.isfinite(matrix)):
        raise SingularSystemError(f"Envelope system at {where} has a vanishing row", math.inf)
    matrix = matrix / scale[:, None]
    rhs = rhs / scale
    cond = float(np.linalg.cond(matrix))
    if not math.isfinite(cond) or cond > COND_LIMIT:
        raise SingularSystemError(f"Envelope system at {where} is singular (condition {cond:.3e})", cond)
    return scipy.linalg.solve(matrix, rhs)


def _check_interior(shape: SolvedShape, u: complex):
    if shape.half_plane * u.imag <= 0:
        raise DomainError(f"Parameter {u} is not in the open {'upper' if shape.half_plane > 0 else 'lower'} half-plane")


def _values(tables: BoundaryTables, u: complex) -> Tuple[float, float, float]:
    if tables.weighted:
        theta = harmonic_eval(tables.theta, u)
        return (
            harmonic_eval(tables.phi, u) / theta,
            harmonic_eval(tables.phi_star, u) / theta,
            harmonic_eval(tables.G, u) / theta,
        )
    return harmonic_eval(tables.s, u), harmonic_eval(tables.t, u), harmonic_eval(tables.c, u)


def _tangent_form(tables: BoundaryTables, u, deriv, facet: Optional[FacetPlane] = None) -> tuple:
    """
    Complex coefficients (A, B, C) of the moving line A x + B y + C = 0.

    In the weighted case theta_u is returned as a fourth entry, or folded in
    through the facet plane h = s0 x + t0 y + c0 when a facet is given.
    """
    if not tables.weighted:
        return deriv(tables.s, u), deriv(tables.t, u), deriv(tables.c, u)
    theta_u = deriv(tables.theta, u)
    a, b, c = deriv(tables.phi, u), deriv(tables.phi_star, u), deriv(tables.G, u)
    if facet is None:
        return a, b, c, theta_u
    return a - theta_u * facet.s, b - theta_u * facet.t, c - theta_u * facet.c


def surface_point(shape: SolvedShape, u: complex) -> Point3:
    """(x, y, h) of the limit shape at the interior parameter u."""
    u = complex(u)
    _check_interior(shape, u)
    return _surface_solve(shape.tables, u)


def _surface_solve(tables: BoundaryTables, u: complex) -> Point3:
    s, t, c = _values(tables, u)
    form = _tangent_form(tables, u, holomorphic_deriv)
    if tables.weighted:
        a, b, g, theta_u = form
        rows = [[s, t, -1.0], [a.real, b.real, -theta_u.real], [a.imag, b.imag, -theta_u.imag]]
        rhs = [-c, -g.real, -g.imag]
    else:
        a, b, g = form
        rows = [[s, t, -1.0], [a.real, b.real, 0.0], [a.imag, b.imag, 0.0]]
        rhs = [-c, -g.real, -g.imag]
    x, y, h = _solve(np.array(rows), np.array(rhs), u)
    return float(x), float(y), float(h)


def fortress_surface_point(field: FortressField, z: complex) -> Point3:
    """(x, y, h) of the fortress limit shape at z in the open annulus (degree-one cover z = u)."""
    s, t, c = field(z)
    s_z, t_z, c_z = field.derivatives(z)
    rows = [[s, t, -1.0], [s_z.real, t_z.real, 0.0], [s_z.imag, t_z.imag, 0.0]]
    x, y, h = _solve(np.array(rows), np.array([-c, -c_z.real, -c_z.imag]), z)
    return float(x), float(y), float(h)


def arctic_point(shape: SolvedShape, u: float) -> Point3:
    """Point where the facet of the anchor interval containing u meets the rough region."""
    u = float(u)
    facet = shape.tables.facet_at(u)
    line = _tangent_form(shape.tables, u, holomorphic_deriv, facet)
    slope = _tangent_form(shape.tables, u, holomorphic_deriv2, facet)
    # on the real line the derivatives are purely imaginary
    rows = np.array([[line[0].imag, line[1].imag], [slope[0].imag, slope[1].imag]])
    rhs = np.array([-line[2].imag, -slope[2].imag])
    x, y = _solve(rows, rhs, u)
    return float(x), float(y), float(facet.height(x, y))


def _push_tables(tables: BoundaryTables, mobius: Mobius) -> BoundaryTables:
    def push(data):
        return None if data is None else pushforward(data, mobius)

    return BoundaryTables(
        anchors=tuple(mobius(a) for a in tables.anchors),
        facets=tables.facets,
        arcs=tuple((mobius(a), mobius(b), f) for a, b, f in tables.arcs),
        s=push(tables.s), t=push(tables.t), c=push(tables.c),
        theta=push(tables.theta), phi=push(tables.phi), phi_star=push(tables.phi_star), G=push(tables.G),
    )


def tangency_point(shape: SolvedShape, index: int) -> Point3:
    """
    Tangency point at anchor a_index (1-based).

    The moving line has a simple pole at the anchor; rescaling by (u - a)
    leaves its envelope unchanged, so the point solves {pole part = 0,
    regular part at a = 0}. The pole part is the side line itself.
    """
    tables = shape.tables
    b = tables.anchors[index - 1]
    if math.isinf(b):
        q = min(a for a in tables.anchors if math.isfinite(a)) - 1.0
        mobius = Mobius(0.0, -1.0, 1.0, -q)
        tables = _push_tables(tables, mobius)
        b = mobius(b)
    # the facet whose arc starts at b
    facet = next(f for start, _, f in tables.arcs if start == b)
    jumps = _tangent_form(tables, b, lambda data, u: complex(jump_at(data, u)), facet)
    regular = _tangent_form(tables, b, regular_deriv_at, facet)
    rows = np.array([[jumps[0].real, jumps[1].real], [regular[0].imag, regular[1].imag]])
    rhs = np.array([-jumps[2].real, -regular[2].imag])
    x, y = _solve(rows, rhs, f"anchor a_{index}")
    return float(x), float(y), float(facet.height(x, y))


def classify_facet(s: float, t: float, model: ModelSpec, tol: float = FACET_TOL) -> Optional[Tuple[float, float]]:
    """The Newton polygon vertex (or neutral slope) within tol of (s, t), else None."""
    candidates = list(model.newton_polygon) + list(model.neutral_slopes.values())
    for slope in candidates:
        if math.hypot(s - slope[0], t - slope[1]) < tol:
            return slope
    return None


def jacobian_det(shape: SolvedShape, u: complex, step: float = 1e-6) -> float:
    """det d(x, y)/d(Re u, Im u) by central differences."""
    u = complex(u)
    cols = []
    for e in (step, step * 1j):
        xp, yp, _ = surface_point(shape, u + e)
        xm, ym, _ = surface_point(shape, u - e)
        cols.append(((xp - xm) / (2 * step), (yp - ym) / (2 * step)))
    return cols[0][0] * cols[1][1] - cols[0][1] * cols[1][0]


def jacobian_sign(shape: SolvedShape, u: complex) -> int:
    return int(np.sign(jacobian_det(shape, u)))


@dataclass
class SurfaceSample:
    """Surface records in grid-major order plus the grid descriptor and skipped parameters."""

    frame: pd.DataFrame
    grid: Dict[str, object]
    skipped: List[Tuple[complex, float]] = field(default_factory=list)

    def plane_residual(self) -> float:
        f = self.frame
        if f.empty:
            return 0.0
        return float(np.max(np.abs(f["h"] - (f["s"] * f["x"] + f["t"] * f["y"] + f["c"]))))


SURFACE_COLUMNS = ["u_re", "u_im", "x", "y", "h", "s", "t", "c", "facet"]


def _format_facet(slope) -> str:
    return "" if slope is None else f"{slope[0]:g},{slope[1]:g}"


def _half_plane_grid(n: int, half_plane: int) -> List[List[complex]]:
    """Polar grid: radii tan(pi (i + 1/2) / 2n), symmetric under u -> 1/u, angles pi (j + 1/2) / n."""
    rows = []
    for i in range(n):
        rho = math.tan(math.pi * (i + 0.5) / (2 * n))
        rows.append([rho * complex(math.cos(a), half_plane * math.sin(a)) for a in (math.pi * (j + 0.5) / n for j in range(n))])
    return rows


def _boundary_ring(n: int, half_plane: int) -> List[List[complex]]:
    """
    The polar radii just off the positive and the negative real axis.

    Interior grid points stay at least sin(pi / 2n) away in angle, so they never
    see a frozen facet; these two extra rows land on the facets next to the
    arctic curve.
    """
    radii = [math.tan(math.pi * (i + 0.5) / (2 * n)) for i in range(n)]
    return [[complex(side * rho, half_plane * BOUNDARY_OFFSET) for rho in radii] for side in (1.0, -1.0)]


def _annulus_grid(n: int) -> List[List[complex]]:
    return [[complex(2.0 * i / n, (j + 0.5) / n) for j in range(n)] for i in range(n)]


def _sample_row(target, model: ModelSpec, row: Sequence[complex]):
    records, skipped = [], []
    fortress = FortressField() if target is None else None
    for u in row:
        try:
            if fortress is not None:
                s, t, c = fortress(u)
                x, y, h = fortress_surface_point(fortress, u)
            else:
                s, t, c = _values(target.tables, u)
                x, y, h = surface_point(target, u)
        except SingularSystemError as exc:
            skipped.append((u, exc.condition_number))
            continue
        records.append((u.real, u.imag, x, y, h, s, t, c, _format_facet(classify_facet(s, t, model))))
    return records, skipped


def sample_surface(shape: Union[SolvedShape, str], n: int = 50, workers: int = 1) -> SurfaceSample:
    """
    Map an n x n parameter grid through the envelope.

    Half-plane grids are followed by 2n boundary samples (grid["boundary"]),
    so frozen facets next to the arctic curve show up in the facet column.

    shape is a SolvedShape, or the string "fortress" for the tau = 1 annulus.
    Rows are processed in parallel with one fortress context per row; the
    merge keeps grid-major order.
    """
    if isinstance(shape, str):
        model = model_spec(shape)
        target = None
        rows = _annulus_grid(n)
        grid = {"kind": "annulus", "n": n}
    else:
        model = shape.model
        target = shape
        rows = _half_plane_grid(n, shape.half_plane) + _boundary_ring(n, shape.half_plane)
        grid = {"kind": "polar", "n": n, "half_plane": shape.half_plane, "boundary": 2 * n}
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(lambda row: _sample_row(target, model, row), rows))
    records = [r for rec, _ in results for r in rec]
    skipped = [s for _, sk in results for s in sk]
    if skipped:
        logger.warning(f"Skipped {len(skipped)} singular surface samples")
    logger.info(f"Sampled {len(records)} surface points on a {grid['kind']} grid")
    return SurfaceSample(pd.DataFrame(records, columns=SURFACE_COLUMNS), grid, skipped)


@dataclass
class ArcticArc:
    facet: FacetPlane
    start: float
    end: float
    params: np.ndarray
    points: np.ndarray


@dataclass
class ArcticCurve:
    """Arcs in facet order; tangency[i] is the point at anchor a_{i+1}."""

    arcs: List[ArcticArc]
    tangency: List[Point3]

    def polyline(self) -> np.ndarray:
        """Closed polyline of (x, y) with the tangency points between arcs."""
        pieces = [arc.points[:, :2] for arc in self.arcs if len(arc.points)]
        return np.vstack(pieces) if pieces else np.empty((0, 2))

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for k, arc in enumerate(self.arcs, start=1):
            for u, (x, y, h) in zip(arc.params, arc.points):
                rows.append((k, arc.facet.index, u, x, y, h))
        return pd.DataFrame(rows, columns=["arc", "facet", "u", "x", "y", "h"])


def _arc_angles(start: float, end: float, count: int) -> np.ndarray:
    a0 = _circle_angle(start)
    span = (_circle_angle(end) - a0) % (2 * math.pi)
    return a0 + span * (np.arange(count) + 0.5) / count


def _evaluate_arc(shape: SolvedShape, angles: np.ndarray):
    params, points = [], []
    for a in angles:
        u = math.tan(0.5 * a)
        try:
            points.append(arctic_point(shape, u))
            params.append(u)
        except SingularSystemError as exc:
            logger.warning(f"Skipping arctic sample at u={u:.6g}: condition {exc.condition_number:.3e}")
    return np.array(params), np.array(points).reshape(-1, 3)


def sample_arctic(shape: SolvedShape, points_per_arc: int = 100, refine: bool = True) -> ArcticCurve:
    """Sample each facet's arc of the arctic curve, uniformly in arc length when refine is set."""
    tables = shape.tables
    k = len(tables.anchors)
    tangency = []
    for i in range(1, k + 1):
        try:
            tangency.append(tangency_point(shape, i))
        except LimitShapeError as exc:
            logger.warning(f"No tangency point at anchor a_{i}: {exc}")
            tangency.append((math.nan, math.nan, math.nan))
    index_of = {a: i for i, a in enumerate(tables.anchors)}
    arcs = []
    for start, end, facet in tables.arcs:
        if start == end:
            continue
        angles = _arc_angles(start, end, points_per_arc)
        params, points = _evaluate_arc(shape, angles)
        if refine and len(points) > 2:
            ends = [tangency[index_of[start]][:2], tangency[index_of[end]][:2]]
            path = np.vstack([ends[0], points[:, :2], ends[1]])
            seg = np.linalg.norm(np.diff(path, axis=0), axis=1)
            if np.all(np.isfinite(seg)):
                arclen = np.concatenate([[0.0], np.cumsum(seg)])
                a0 = _circle_angle(start)
                span = (_circle_angle(end) - a0) % (2 * math.pi)
                knots = np.concatenate([[a0], a0 + (2 * np.arctan(params) - a0) % (2 * math.pi), [a0 + span]])
                wanted = arclen[-1] * (np.arange(points_per_arc) + 0.5) / points_per_arc
                params, points = _evaluate_arc(shape, np.interp(wanted, arclen, knots))
        arcs.append(ArcticArc(facet, start, end, params, points))
    logger.info(f"Sampled {sum(len(a.points) for a in arcs)} arctic points on {len(arcs)} arcs")
    return ArcticCurve(arcs, tangency)
