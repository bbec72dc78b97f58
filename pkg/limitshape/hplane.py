"""
Harmonic functions on a half-plane from piecewise-constant boundary data.

A BoundaryData instance stores the jumps of a step function on the real line
(with the point at infinity as an implicit extra breakpoint) and evaluates its
bounded harmonic extension through harmonic measure, together with the
holomorphic derivatives used by the envelope equations. Mobius holds the real
fractional-linear maps used for gauge fixing.
"""
import bisect
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Tuple

import numpy as np

from .errors import BoundaryDataError, DegenerateMapError, DomainError, PoleError, UndefinedBoundaryPointError

# Distance below which a point counts as sitting on a breakpoint
BREAKPOINT_TOL = 1e-12


class _AtInfinity:
    """Projective point at infinity returned instead of a huge float."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "AT_INFINITY"


AT_INFINITY = _AtInfinity()


def is_infinite(x) -> bool:
    """True for AT_INFINITY and for real or complex infinities."""
    if x is AT_INFINITY:
        return True
    try:
        return bool(np.isinf(x))
    except TypeError:
        return False


def _circle_angle(x: float) -> float:
    """Position of a point of the extended real line on the circle, with +inf at pi."""
    if math.isinf(x):
        return math.pi
    return 2.0 * math.atan(x)


def _from_circle_angle(angle: float) -> float:
    """Inverse of _circle_angle on (-pi, pi)."""
    return math.tan(0.5 * angle)


def _arc_contains(start: float, end: float, x: float) -> bool:
    """Whether x lies inside the arc running upward from start to end on the extended line."""
    two_pi = 2.0 * math.pi
    span = (_circle_angle(end) - _circle_angle(start)) % two_pi
    offset = (_circle_angle(x) - _circle_angle(start)) % two_pi
    if span == 0.0:
        # A single arc closing on itself covers the whole line
        return start == end and offset != 0.0
    return 0.0 < offset < span


@dataclass(frozen=True)
class BoundaryData:
    """
    Step function on the real line and its harmonic extension.

    values[0] is the value on (-inf, b_1), values[j] the value on (b_j, b_{j+1})
    and values[-1] the value on (b_k, +inf). half_plane selects the upper (+1)
    or lower (-1) half-plane for the extension.
    """

    breakpoints: Tuple[float, ...]
    values: Tuple[float, ...]
    half_plane: int = 1
    _b: np.ndarray = field(init=False, repr=False, compare=False)
    _jumps: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        breakpoints = tuple(float(b) for b in self.breakpoints)
        values = tuple(float(v) for v in self.values)
        if len(values) != len(breakpoints) + 1:
            raise BoundaryDataError(
                f"Expected {len(breakpoints) + 1} values for {len(breakpoints)} breakpoints, got {len(values)}"
            )
        if any(not math.isfinite(b) for b in breakpoints):
            raise BoundaryDataError("Breakpoints must be finite; infinity is implicit")
        if any(b2 <= b1 for b1, b2 in zip(breakpoints, breakpoints[1:])):
            raise BoundaryDataError(f"Breakpoints must be strictly increasing: {breakpoints}")
        if self.half_plane not in (1, -1):
            raise BoundaryDataError("half_plane must be +1 (upper) or -1 (lower)")
        object.__setattr__(self, "breakpoints", breakpoints)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_b", np.array(breakpoints, dtype=float))
        # d_j = v_{j-1} - v_j, the jump when crossing b_j leftwards
        object.__setattr__(self, "_jumps", np.array(values[:-1]) - np.array(values[1:]))

    @classmethod
    def constant(cls, value: float, half_plane: int = 1) -> "BoundaryData":
        return cls((), (value,), half_plane)

    @classmethod
    def from_arcs(cls, arcs: Iterable[Tuple[float, float, float]], half_plane: int = 1) -> "BoundaryData":
        """
        Build data from arcs (start, end, value) of the extended real line.

        Each arc runs upward from start to end and may pass through infinity;
        endpoints may be math.inf. Zero-length arcs are ignored.
        """
        arcs = [(float(s), float(e), float(v)) for s, e, v in arcs]
        if not arcs:
            raise BoundaryDataError("At least one arc is required")
        finite = sorted({p for s, e, _ in arcs for p in (s, e) if math.isfinite(p)})

        def lookup(x):
            for s, e, v in arcs:
                if _arc_contains(s, e, x):
                    return v
            raise BoundaryDataError(f"No arc covers the point {x}")

        if not finite:
            return cls.constant(lookup(0.0), half_plane)
        # Outer samples halfway to infinity on the circle; a fixed offset is lost to rounding for large |b|
        samples = [_from_circle_angle(0.5 * (_circle_angle(finite[0]) - math.pi))]
        samples += [0.5 * (b1 + b2) for b1, b2 in zip(finite, finite[1:])]
        samples.append(_from_circle_angle(0.5 * (_circle_angle(finite[-1]) + math.pi)))
        values = [lookup(x) for x in samples]

        # Merge breakpoints across which the value does not jump
        breakpoints, merged = [], [values[0]]
        for b, v in zip(finite, values[1:]):
            if v != merged[-1]:
                breakpoints.append(b)
                merged.append(v)
        return cls(tuple(breakpoints), tuple(merged), half_plane)

    @property
    def value_at_infinity_jump(self) -> float:
        """Jump across the implicit breakpoint at infinity (left value minus right value)."""
        return self.values[0] - self.values[-1]

    def arcs(self) -> List[Tuple[float, float, float]]:
        """Inverse of from_arcs: the data as upward arcs, infinity included when it is a jump."""
        b = list(self.breakpoints)
        if not b:
            return [(math.inf, math.inf, self.values[0])]
        arcs = [(b[j], b[j + 1], self.values[j + 1]) for j in range(len(b) - 1)]
        if self.values[0] == self.values[-1]:
            arcs.append((b[-1], b[0], self.values[-1]))
        else:
            arcs.append((b[-1], math.inf, self.values[-1]))
            arcs.append((math.inf, b[0], self.values[0]))
        return arcs

    def value_on_line(self, x: float) -> float:
        """Boundary value at a real point that is not a breakpoint."""
        self._check_not_breakpoint(complex(x, 0.0))
        return self.values[bisect.bisect_right(self.breakpoints, x)]

    def bounds(self) -> Tuple[float, float]:
        return min(self.values), max(self.values)

    def _check_not_breakpoint(self, u: complex):
        if self._b.size and np.min(np.abs(u - self._b)) < BREAKPOINT_TOL:
            raise UndefinedBoundaryPointError(f"Point {u} is a breakpoint of the boundary data")


def harmonic_eval(data: BoundaryData, u: complex) -> float:
    """
    Value of the harmonic extension at u in the closed half-plane.

    On the real line away from breakpoints the boundary value is returned exactly.
    """
    u = complex(u)
    if data.half_plane * u.imag < 0:
        raise DomainError(f"Point {u} lies outside the {'upper' if data.half_plane > 0 else 'lower'} half-plane")
    data._check_not_breakpoint(u)
    if u.imag == 0.0:
        return data.value_on_line(u.real)
    if not data._b.size:
        return data.values[0]
    args = np.angle(u - data._b)
    return float(data.values[-1] + data.half_plane * np.dot(data._jumps, args) / math.pi)


def holomorphic_deriv(data: BoundaryData, u: complex) -> complex:
    """d/du of the harmonic extension, a rational function of u with simple poles at breakpoints."""
    u = complex(u)
    if not data._b.size:
        return 0j
    diff = u - data._b
    if np.min(np.abs(diff)) < BREAKPOINT_TOL:
        raise PoleError(f"Derivative has a pole at breakpoint {u}")
    return complex(data.half_plane * np.sum(data._jumps / diff) / (2j * math.pi))


def holomorphic_deriv2(data: BoundaryData, u: complex) -> complex:
    """Second u-derivative of the harmonic extension."""
    u = complex(u)
    if not data._b.size:
        return 0j
    diff = u - data._b
    if np.min(np.abs(diff)) < BREAKPOINT_TOL:
        raise PoleError(f"Second derivative has a pole at breakpoint {u}")
    return complex(-data.half_plane * np.sum(data._jumps / diff ** 2) / (2j * math.pi))


@dataclass(frozen=True)
class Mobius:
    """Real fractional-linear map x -> (a x + b) / (c x + d), stored with |det| = 1."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if det == 0 or not math.isfinite(det):
            raise DegenerateMapError(f"Mobius coefficients are singular: det={det}")
        scale = 1.0 / math.sqrt(abs(det))
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, float(getattr(self, name)) * scale)

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(1.0, 0.0, 0.0, 1.0)

    @property
    def determinant(self) -> float:
        return self.a * self.d - self.b * self.c

    @property
    def preserves_upper_half_plane(self) -> bool:
        return self.determinant > 0

    def __call__(self, x):
        if is_infinite(x):
            return self.a / self.c if self.c != 0 else math.inf
        den = self.c * x + self.d
        if den == 0:
            return math.inf
        return (self.a * x + self.b) / den

    def compose(self, other: "Mobius") -> "Mobius":
        """self after other."""
        return Mobius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)


def _to_zero_one_infinity(p: float, q: float, r: float) -> Mobius:
    """Cross-ratio map sending p, q, r to 0, 1, infinity."""
    if math.isinf(p):
        return Mobius(0.0, q - r, 1.0, -r)
    if math.isinf(q):
        return Mobius(1.0, -p, 1.0, -r)
    if math.isinf(r):
        return Mobius(1.0, -p, 0.0, q - p)
    return Mobius(q - r, -p * (q - r), q - p, -r * (q - p))


def mobius_from_three_points(p: float, q: float, r: float, P: float, Q: float, R: float) -> Mobius:
    """Unique real Mobius map sending p, q, r to P, Q, R (math.inf allowed)."""
    for triple in ((p, q, r), (P, Q, R)):
        if len(set(triple)) < 3:
            raise DegenerateMapError(f"Points must be distinct: {triple}")
    source = _to_zero_one_infinity(p, q, r)
    target = _to_zero_one_infinity(P, Q, R)
    return target.inverse().compose(source)


def pushforward(data: BoundaryData, mobius: Mobius) -> BoundaryData:
    """
    Transport boundary data along a real Mobius map, so that
    harmonic_eval(pushforward(data, M), M(u)) == harmonic_eval(data, u).
    """
    if not mobius.preserves_upper_half_plane:
        raise DegenerateMapError("Pushforward requires a map preserving the half-plane")
    arcs = [(mobius(s), mobius(e), v) for s, e, v in data.arcs()]
    return BoundaryData.from_arcs(arcs, data.half_plane)


def jump_at(data: BoundaryData, b: float) -> float:
    """Jump d = (left value) - (right value) at a real point; 0 away from breakpoints."""
    if not data._b.size:
        return 0.0
    k = int(np.argmin(np.abs(data._b - b)))
    return float(data._jumps[k]) if abs(data._b[k] - b) < BREAKPOINT_TOL else 0.0


def regular_deriv_at(data: BoundaryData, b: float) -> complex:
    """holomorphic_deriv at a real point with the simple pole at b (if any) removed."""
    if not data._b.size:
        return 0j
    diff = b - data._b
    keep = np.abs(diff) >= BREAKPOINT_TOL
    return complex(data.half_plane * np.sum(data._jumps[keep] / diff[keep]) / (2j * math.pi))
