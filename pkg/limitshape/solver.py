"""
Parameter matching for the rational cover z(u).

Finds tangency anchors a_1..a_K and the prefactor B such that z(u) takes the
prescribed real values at the anchors and the intercept derivative vanishes
at the critical points of z. Unknowns live in ordered coordinates (anchors
as exponential gaps) and are solved by damped Newton with a central
difference Jacobian, continuing in side lengths from a reference region.
"""
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.special import expit, logit

from .errors import (
    ConvergenceError,
    CriticalPointError,
    DegenerateMapError,
    DomainError,
    ImbalanceError,
    InfeasibleRegionError,
    LimitShapeError,
    PoleError,
    RegionError,
)
from .hplane import AT_INFINITY, holomorphic_deriv, is_infinite, mobius_from_three_points
from .logger import get_logger
from .models import ModelKind
from .regions import (
    BoundaryTables,
    PolygonRegion,
    Side,
    anchor_order_violation,
    balance_check,
    boundary_tables,
    fv_hexagon_region,
    octagon_region,
    validate_region,
)

logger = get_logger()

SQRT2 = math.sqrt(2.0)
POLE_TOL = 1e-14
RESIDUAL_TOL = 1e-12
ACCEPT_TOL = 1e-10
MAX_ITER = 100
FD_STEP = 1e-7
REFERENCE_OCTAGON = (0.5, 0.25)
REFERENCE_FV_M = 1.0


@dataclass(frozen=True)
class RationalMap:
    """z(u) = B * prod(u - zeros) / prod(u - poles); math.inf entries only count towards the degree."""

    B: float
    zeros: Tuple[float, ...] = ()
    poles: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.B == 0 or not math.isfinite(self.B):
            raise DegenerateMapError(f"Prefactor must be finite and non-zero, got {self.B}")
        object.__setattr__(self, "zeros", tuple(float(a) for a in self.zeros))
        object.__setattr__(self, "poles", tuple(float(a) for a in self.poles))

    @property
    def degree(self) -> int:
        return max(len(self.zeros), len(self.poles))

    @property
    def finite_zeros(self) -> Tuple[float, ...]:
        return tuple(a for a in self.zeros if math.isfinite(a))

    @property
    def finite_poles(self) -> Tuple[float, ...]:
        return tuple(a for a in self.poles if math.isfinite(a))

    def numerator(self) -> np.ndarray:
        """Ascending coefficients of B * prod(u - finite zeros)."""
        return self.B * npoly.polyfromroots(self.finite_zeros) if self.finite_zeros else np.array([self.B])

    def denominator(self) -> np.ndarray:
        return npoly.polyfromroots(self.finite_poles) if self.finite_poles else np.array([1.0])

    def maps_half_plane(self, half_plane: int = 1) -> bool:
        """Sample check that z sends the chosen half-plane into itself."""
        u = complex(0.123, half_plane * 1.0)
        z = rmap_eval(self, u)
        return z is not AT_INFINITY and half_plane * z.imag > 0


def rmap_eval(rmap: RationalMap, u):
    """z(u); AT_INFINITY at poles, including u = infinity when deg P > deg Q."""
    if is_infinite(u):
        gap = len(rmap.finite_zeros) - len(rmap.finite_poles)
        if gap > 0:
            return AT_INFINITY
        return complex(rmap.B) if gap == 0 else 0j
    u = complex(u)
    if any(abs(u - p) < POLE_TOL for p in rmap.finite_poles):
        return AT_INFINITY
    value = complex(rmap.B)
    for a in rmap.finite_zeros:
        value *= u - a
    for a in rmap.finite_poles:
        value /= u - a
    return value


def rmap_deriv(rmap: RationalMap, u):
    """dz/du by the quotient rule; AT_INFINITY at poles."""
    if is_infinite(u):
        gap = len(rmap.finite_zeros) - len(rmap.finite_poles)
        if gap > 1:
            return AT_INFINITY
        return complex(rmap.B) if gap == 1 else 0j
    u = complex(u)
    if any(abs(u - p) < POLE_TOL for p in rmap.finite_poles):
        return AT_INFINITY
    num, den = rmap.numerator(), rmap.denominator()
    q = npoly.polyval(u, den)
    top = npoly.polyval(u, npoly.polyder(num)) * q - npoly.polyval(u, num) * npoly.polyval(u, npoly.polyder(den))
    return complex(top / (q * q))


def _critical_numerator(rmap: RationalMap) -> np.ndarray:
    num, den = rmap.numerator(), rmap.denominator()
    top = npoly.polysub(npoly.polymul(npoly.polyder(num), den), npoly.polymul(num, npoly.polyder(den)))
    return npoly.polytrim(np.atleast_1d(top), tol=1e-14 * max(1.0, float(np.max(np.abs(top)))))


def critical_points(rmap: RationalMap) -> List[complex]:
    """All finite roots of z'(u) with multiplicity, from the companion matrix of P'Q - PQ'."""
    if rmap.degree == 0:
        raise DegenerateMapError("A constant map has no critical points")
    top = _critical_numerator(rmap)
    if len(top) <= 1:
        return []
    roots = npoly.polyroots(top)
    return sorted((complex(r) for r in roots), key=lambda r: (round(r.real, 12), r.imag))


def half_plane_critical_points(rmap: RationalMap, half_plane: int = 1) -> List[complex]:
    """One representative of each conjugate pair: the root in the open half-plane, sorted by real part."""
    points = [u for u in critical_points(rmap) if half_plane * u.imag > 1e-12 * max(1.0, abs(u))]
    return sorted(points, key=lambda u: u.real)


# --- maps and residuals -----------------------------------------------------

def domino_map(anchors: Sequence[float], B: float) -> RationalMap:
    """Zeros at anchors a_4, a_8, ..., poles at a_2, a_6, ... (1-based)."""
    zeros = tuple(a for i, a in enumerate(anchors, start=1) if i % 4 == 0)
    poles = tuple(a for i, a in enumerate(anchors, start=1) if i % 4 == 2)
    return RationalMap(B, zeros, poles)


def fv_map(anchors: Sequence[float]) -> RationalMap:
    """z = -(u - a_3)(u - a_7) / ((u - a_1)(u - a_5)) for the five-vertex hexagon."""
    a = anchors
    return RationalMap(-1.0, (a[2], a[6]), (a[0], a[4]))


def cover_map(poly: PolygonRegion, anchors: Sequence[float], B: float) -> RationalMap:
    if poly.model.kind is ModelKind.FIVE_VERTEX:
        return fv_map(anchors)
    return domino_map(anchors, B)


def _z_targets(poly: PolygonRegion, k: int) -> List[Tuple[int, float]]:
    """(0-based anchor index, required real z value) for the anchors not fixed as zeros or poles."""
    if poly.model.kind is ModelKind.FIVE_VERTEX:
        return [(i, 1.0 if (i + 1) % 4 == 2 else -1.0) for i in range(k) if (i + 1) % 2 == 0]
    return [(i, -1.0 if (i + 1) % 4 == 1 else 1.0) for i in range(k) if (i + 1) % 2 == 1]


def critical_residuals(tables: BoundaryTables, rmap: RationalMap, half_plane: int) -> List[complex]:
    """2 pi times c_u (G_u for weighted tables) at each critical point of z in the open half-plane."""
    data = tables.G if tables.weighted else tables.c
    return [2 * math.pi * holomorphic_deriv(data, u) for u in half_plane_critical_points(rmap, half_plane)]


def unknown_count(poly: PolygonRegion, k: int) -> int:
    """Free parameters once the gauge is fixed: K - 3 anchors plus B, or K - 3 for the five-vertex chart."""
    return k - 3 if poly.model.kind is ModelKind.FIVE_VERTEX else k - 2


def residuals(anchors: Sequence[float], B: float, poly: PolygonRegion) -> np.ndarray:
    """
    Stacked real residual vector: z-value conditions at anchors, then real and
    imaginary parts of the critical-point conditions.

    The length always equals unknown_count; a critical point on the real line
    raises CriticalPointError instead of returning a shorter vector.
    """
    anchors = tuple(float(a) for a in anchors)
    violation = anchor_order_violation(anchors)
    if violation is not None:
        i, j = violation
        raise InfeasibleRegionError(
            f"Anchors a_{i}={anchors[i - 1]} and a_{j}={anchors[j - 1]} are out of cyclic order", violation
        )
    tables = boundary_tables(poly, anchors)
    rmap = cover_map(poly, anchors, B)
    out = []
    for i, target in _z_targets(poly, len(anchors)):
        if math.isinf(anchors[i]):
            # value at infinity is fixed by the prefactor
            continue
        z = rmap_eval(rmap, anchors[i])
        if z is AT_INFINITY:
            raise PoleError(f"Anchor a_{i + 1} hit a pole of z")
        out.append(z.real - target)
    for value in critical_residuals(tables, rmap, poly.model.half_plane):
        out.extend((value.real, value.imag))
    expected = unknown_count(poly, len(anchors))
    if len(out) != expected:
        raise CriticalPointError(f"Residual has {len(out)} entries for {expected} unknowns; a critical point left the half-plane")
    return np.array(out, dtype=float)


# --- ordered coordinates ----------------------------------------------------

class _DominoChart:
    """a_1 = 0, a_2 = -1, a_K = inf, a_{i+1} = a_i - exp(g_i); the last coordinate is B."""

    def __init__(self, k: int):
        self.k = k

    def to_anchors(self, p: np.ndarray) -> Tuple[Tuple[float, ...], float]:
        anchors = [0.0, -1.0]
        for g in p[:-1]:
            anchors.append(anchors[-1] - math.exp(g))
        anchors.append(math.inf)
        return tuple(anchors), float(p[-1])

    def from_anchors(self, anchors: Sequence[float], B: float) -> np.ndarray:
        gaps = [math.log(anchors[i] - anchors[i + 1]) for i in range(1, self.k - 2)]
        return np.array(gaps + [B], dtype=float)


class _FiveVertexChart:
    """a_1 = 0, a_8 = inf, a_4 a_5 = 1, with a_2, a_3 squeezed between a_4 and 0."""

    k = 8

    def to_anchors(self, p: np.ndarray) -> Tuple[Tuple[float, ...], float]:
        g2, g3, g4, g6, g7 = p
        a4 = -float(expit(g4))
        a2 = a4 * float(expit(g2))
        a3 = a4 + (a2 - a4) * float(expit(g3))
        a5 = 1.0 / a4
        a6 = a5 - math.exp(g6)
        a7 = a6 - math.exp(g7)
        return (0.0, a2, a3, a4, a5, a6, a7, math.inf), -1.0

    def from_anchors(self, anchors: Sequence[float], B: float = -1.0) -> np.ndarray:
        _, a2, a3, a4, a5, a6, a7, _ = anchors
        return np.array([
            logit(a2 / a4),
            logit((a3 - a4) / (a2 - a4)),
            logit(-a4),
            math.log(a5 - a6),
            math.log(a6 - a7),
        ])


def _in_gauge(anchors: Sequence[float], kind: ModelKind) -> bool:
    if anchors[0] != 0.0 or not math.isinf(anchors[-1]):
        return False
    if kind is ModelKind.FIVE_VERTEX:
        return abs(anchors[3] * anchors[4] - 1.0) < 1e-15
    return anchors[1] == -1.0


def regauge(anchors: Sequence[float], kind=ModelKind.DOMINO) -> Tuple[float, ...]:
    """
    Apply the real Mobius map that puts the anchors in the solver gauge.

    Domino: a_1 = 0, a_2 = -1, a_K = inf. Five-vertex: a_1 = 0, a_K = inf, a_4 a_5 = 1.
    """
    kind = ModelKind(kind)
    if _in_gauge(anchors, kind):
        return tuple(float(a) for a in anchors)
    mobius = mobius_from_three_points(anchors[0], anchors[-1], anchors[1], 0.0, math.inf, -1.0)
    if not mobius.preserves_upper_half_plane:
        raise DegenerateMapError("Anchors are listed in the wrong cyclic direction")
    moved = [mobius(a) for a in anchors]
    moved[0], moved[-1] = 0.0, math.inf
    if kind is ModelKind.FIVE_VERTEX:
        scale = 1.0 / math.sqrt(moved[3] * moved[4])
        moved = [a * scale for a in moved]
    else:
        moved[1] = -1.0
    return tuple(float(a) for a in moved)


# --- Newton -------------------------------------------------------------------

def _jacobian(fun, p: np.ndarray, r0: np.ndarray) -> np.ndarray:
    jac = np.empty((r0.size, p.size))
    for j in range(p.size):
        h = FD_STEP * max(1.0, abs(p[j]))
        e = np.zeros_like(p)
        e[j] = h
        jac[:, j] = (fun(p + e) - fun(p - e)) / (2 * h)
    return jac


def _damped_newton(fun, p0: np.ndarray, tol: float, max_iter: int) -> Tuple[np.ndarray, float, int]:
    p = np.array(p0, dtype=float)
    r = fun(p)
    norm = float(np.linalg.norm(r))
    iterations = 0
    while norm > tol:
        if iterations >= max_iter:
            raise ConvergenceError(f"No convergence after {iterations} iterations", iterations, norm)
        try:
            jac = _jacobian(fun, p, r)
        except (LimitShapeError, OverflowError) as exc:
            raise ConvergenceError(f"Jacobian undefined at residual {norm:.3e}: {exc}", iterations, norm) from exc
        step = np.linalg.lstsq(jac, -r, rcond=None)[0]
        lam, accepted = 1.0, False
        while lam > 1e-10:
            trial = p + lam * step
            try:
                r_trial = fun(trial)
                trial_norm = float(np.linalg.norm(r_trial))
            except (LimitShapeError, OverflowError):
                # exp of a runaway gap overflows in the chart
                trial_norm = math.inf
            if trial_norm < norm:
                accepted = True
                break
            lam *= 0.5
        if not accepted:
            if norm < ACCEPT_TOL:
                logger.debug(f"Residual floor reached at {norm:.3e}")
                break
            raise ConvergenceError(f"Line search failed at residual {norm:.3e}", iterations, norm)
        p, r, norm = trial, r_trial, trial_norm
        iterations += 1
        logger.debug(f"iter {iterations}: |r|={norm:.3e} damping={lam:g} cond={np.linalg.cond(jac):.3e}")
    return p, norm, iterations


@dataclass(frozen=True)
class SolvedShape:
    region: PolygonRegion
    anchors: Tuple[float, ...]
    rmap: RationalMap
    tables: BoundaryTables
    residual_norm: float
    iterations: int = 0

    @property
    def model(self):
        return self.region.model

    @property
    def half_plane(self) -> int:
        return self.region.model.half_plane

    @property
    def critical_points(self) -> List[complex]:
        return half_plane_critical_points(self.rmap, self.half_plane)

    def critical_residuals(self) -> List[float]:
        return [abs(v) / (2 * math.pi) for v in critical_residuals(self.tables, self.rmap, self.half_plane)]


def _interpolate(start: PolygonRegion, target: PolygonRegion, lam: float) -> PolygonRegion:
    sides = tuple(
        Side(b.type_label, (1 - lam) * float(a.length) + lam * float(b.length), b.direction)
        for a, b in zip(start.sides, target.sides)
    )
    return replace(target, sides=sides)


def _reference_start(poly: PolygonRegion):
    """(reference region, anchors, B) of the same combinatorial type, or None."""
    k = len(poly.sides)
    if poly.model.kind is ModelKind.FIVE_VERTEX:
        ref = fv_hexagon_region(REFERENCE_FV_M, poly.model.r)
        return ref, closed_form_fv_hexagon(REFERENCE_FV_M), -1.0
    if k == 8:
        ref = octagon_region(*REFERENCE_OCTAGON)
        anchors = closed_form_octagon(*REFERENCE_OCTAGON)
        return ref, anchors, octagon_prefactor(anchors)
    return None


def _spread_start(k: int) -> Tuple[Tuple[float, ...], float]:
    """Gauge-compatible anchors spread over (-inf, -1) by angle, with B making z(a_1) = -1."""
    anchors = [0.0, -1.0]
    for i in range(2, k - 1):
        angle = 0.25 * math.pi + 0.25 * math.pi * (i - 1) / (k - 2)
        anchors.append(-math.tan(angle))
    anchors.append(math.inf)
    unit = rmap_eval(domino_map(anchors, 1.0), 0.0)
    return tuple(anchors), -1.0 / unit.real


def octagon_feasibility(m1: float, m2: float) -> float:
    """
    Check m1 >= m2 >= (3 + 2 sqrt 2) m1 - 2 (1 + sqrt 2) and return the lower bound.

    Raises InfeasibleRegionError quoting the violated inequality.
    """
    bound = (3 + 2 * SQRT2) * m1 - 2 * (1 + SQRT2)
    if m1 < m2:
        raise InfeasibleRegionError(f"Octagon infeasible: m1 >= m2 fails for m1={m1}, m2={m2}", "m1 >= m2")
    if m2 < bound:
        text = f"m2 >= (3+2*sqrt(2))*m1 - 2*(1+sqrt(2)) = {bound:.6f}"
        raise InfeasibleRegionError(f"Octagon infeasible: {text} fails for m2={m2}", text)
    return bound


def closed_form_octagon(m1: float, m2: float) -> Tuple[float, ...]:
    """The eight anchors of the diagonally symmetric octagon in the gauge a_1 = 0, a_2 = -1, a_8 = inf."""
    if m1 == m2:
        raise DegenerateMapError("Octagon anchors a_5, a_6, a_7 have a pole at m1 = m2")
    if m2 == 1:
        raise DegenerateMapError("Octagon anchor a_4 has a pole at m2 = 1")
    spread = 2 - m1 - m2
    return (
        0.0,
        -1.0,
        -SQRT2,
        -(1 + SQRT2) * spread / (2 * (1 - m2)),
        -(4 - 2 * SQRT2) * (1 - m2) / (m1 - m2),
        -spread / (m1 - m2),
        -SQRT2 * spread / (m1 - m2),
        math.inf,
    )


def octagon_prefactor(anchors: Sequence[float]) -> float:
    """B_1 = -a_6 / a_4, fixed by z(0) = -1."""
    return -anchors[5] / anchors[3]


def closed_form_fv_hexagon(m: float) -> Tuple[float, ...]:
    """Five-vertex hexagon anchors; a_5..a_7 are the inverses of a_4..a_2 and a_8 = inf."""
    if m <= 0:
        raise DomainError(f"Hexagon parameter m must be positive, got {m}")
    root = math.sqrt(m + 2)
    a2 = -math.sqrt(m) / (2 ** 0.25 * root)
    a3 = -(2 ** 0.25) * math.sqrt(m) / root
    a4 = -(2 + SQRT2) / 2 ** 1.75 * math.sqrt(m * (m + 2)) / (m + 1)
    return (0.0, a2, a3, a4, 1 / a4, 1 / a3, 1 / a2, math.inf)


def _build(poly: PolygonRegion, anchors, B, norm: float, iterations: int) -> SolvedShape:
    anchors = tuple(float(a) for a in anchors)
    return SolvedShape(poly, anchors, cover_map(poly, anchors, B), boundary_tables(poly, anchors), norm, iterations)


def _newton_on(poly: PolygonRegion, chart, anchors, B, tol: float, max_iter: int):
    def fun(p):
        a, b = chart.to_anchors(p)
        return residuals(a, b, poly)

    p, norm, iterations = _damped_newton(fun, chart.from_anchors(anchors, B), tol, max_iter)
    anchors, B = chart.to_anchors(p)
    return anchors, B, norm, iterations


def solve_parameters(
    poly: PolygonRegion,
    init: Optional[Tuple[Sequence[float], float]] = None,
    steps: int = 8,
    tol: float = RESIDUAL_TOL,
    max_iter: int = MAX_ITER,
) -> SolvedShape:
    """
    Solve the anchor problem for a balanced domino 4n-gon or the five-vertex hexagon.

    init is an (anchors, B) pair, for example read back from a previous solve;
    without it the solve continues in side lengths from the reference region
    of the same type (octagon at (1/2, 1/4), hexagon at m = 1).
    """
    validate_region(poly)
    kind = poly.model.kind
    if kind not in (ModelKind.DOMINO, ModelKind.FIVE_VERTEX):
        raise RegionError(f"No parameter problem for model {kind.value}")
    if abs(balance_check(poly)) > 1e-12:
        raise ImbalanceError(f"Region is unbalanced (residual {float(balance_check(poly)):.3g})")
    if poly.family == "octagon":
        octagon_feasibility(poly.params["m1"], poly.params["m2"])
    k = poly.anchor_count()
    logger.info(f"Solving {kind.value} region with {len(poly.sides)} sides, {k} anchors")

    if kind is ModelKind.DOMINO and k == 4:
        # degree one: z = u with anchors -1, inf, 1, 0
        anchors = (-1.0, math.inf, 1.0, 0.0)
        return _build(poly, anchors, 1.0, float(np.linalg.norm(residuals(anchors, 1.0, poly))), 0)
    if kind is ModelKind.FIVE_VERTEX:
        if k != 8:
            raise RegionError("Only the five-vertex hexagon is supported")
        chart = _FiveVertexChart()
    else:
        chart = _DominoChart(k)

    if init is not None:
        anchors, B = init
        anchors = regauge(anchors, kind)
        norm = float(np.linalg.norm(residuals(anchors, B, poly)))
        if norm < ACCEPT_TOL:
            logger.info(f"Initial guess already solves the region, |r|={norm:.3e}")
            return _build(poly, anchors, B, norm, 0)
        anchors, B, norm, iterations = _newton_on(poly, chart, anchors, B, tol, max_iter)
        logger.info(f"Converged from initial guess in {iterations} iterations, |r|={norm:.3e}")
        return _build(poly, anchors, B, norm, iterations)

    start = _reference_start(poly)
    if start is None:
        anchors, B = _spread_start(k)
        try:
            anchors, B, norm, iterations = _newton_on(poly, chart, anchors, B, tol, max_iter)
        except ConvergenceError as exc:
            raise ConvergenceError(
                f"No solution from the spread start for the {len(poly.sides)}-gon; anchors may degenerate: {exc}",
                exc.iterations,
                exc.residual_norm,
            ) from exc
        logger.info(f"Converged from the spread start in {iterations} iterations, |r|={norm:.3e}")
        return _build(poly, anchors, B, norm, iterations)

    ref, anchors, B = start
    lam, dlam, total_iter = 0.0, 1.0 / max(1, steps), 0
    if all(abs(float(a.length) - float(b.length)) < 1e-15 for a, b in zip(ref.sides, poly.sides)):
        lam = 1.0
    norm = 0.0
    while True:
        target = min(1.0, lam + dlam) if lam < 1.0 else 1.0
        try:
            anchors, B, norm, iterations = _newton_on(
                poly if target == 1.0 else _interpolate(ref, poly, target), chart, anchors, B, tol, max_iter
            )
        except (ConvergenceError, InfeasibleRegionError, CriticalPointError, PoleError) as exc:
            if target == 1.0 and lam == 1.0 or dlam < 1e-3:
                raise ConvergenceError(f"Continuation stalled at lambda={lam:.4f}: {exc}", total_iter, norm) from exc
            dlam *= 0.5
            logger.debug(f"Continuation step halved to {dlam:g} at lambda={lam:.4f}")
            continue
        total_iter += iterations
        lam = target
        if lam >= 1.0:
            break
    logger.info(f"Converged by continuation in {total_iter} iterations, |r|={norm:.3e}")
    return _build(poly, anchors, B, norm, total_iter)
