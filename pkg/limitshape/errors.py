"""
Exception hierarchy for the limit shape library.

Every failure raised by the library derives from LimitShapeError so the
command line front end can catch one type. Errors that describe a bad
input value also derive from ValueError.
"""


class LimitShapeError(Exception):
    """Base class for all library errors."""


class DomainError(LimitShapeError, ValueError):
    """Argument outside the domain of a function or a parameter family."""


class BoundaryDataError(LimitShapeError, ValueError):
    """Step data on the real line is malformed: unsorted breakpoints or arcs that leave a gap."""


class UndefinedBoundaryPointError(LimitShapeError, ValueError):
    """Harmonic extension evaluated exactly at a jump of its boundary data."""


class PoleError(LimitShapeError, ZeroDivisionError):
    """A holomorphic quantity was evaluated at one of its poles."""


class DegenerateMapError(LimitShapeError, ValueError):
    """A Möbius or rational map would be constant or singular."""


class NomeDomainError(LimitShapeError, ValueError):
    """Theta series requested outside the unit disc |q| < 1."""


class BoundaryVertexError(LimitShapeError, ValueError):
    """Slope functions evaluated at a branch point of the spectral data."""


class RegionError(LimitShapeError, ValueError):
    """Base class for malformed polygonal regions."""


class ClosureError(RegionError):
    """Region sides do not return to the anchor corner."""


class LabelCycleError(RegionError):
    """Side type labels are not in cyclic order."""


class OrientationError(RegionError):
    """Region boundary is not traversed clockwise."""


class DirectionError(RegionError):
    """A side is not parallel to the direction its type requires."""


class ImbalanceError(LimitShapeError, ValueError):
    """Facet intercepts fail to close after a full boundary loop."""


class AnchorCountError(LimitShapeError, ValueError):
    """Number of tangency anchors does not match the region."""


class InfeasibleRegionError(LimitShapeError, ValueError):
    """Anchors cannot be cyclically ordered, i.e. the region has no tiling."""

    def __init__(self, message, violation=None):
        super().__init__(message)
        self.violation = violation


class ConvergenceError(LimitShapeError, RuntimeError):
    """Parameter solver stopped without reaching its tolerance."""

    def __init__(self, message, iterations=None, residual_norm=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual_norm = residual_norm


class CriticalPointError(LimitShapeError, ArithmeticError):
    """A critical point of the cover reached the real line, so the residual changes length."""


class SingularSystemError(LimitShapeError, ArithmeticError):
    """Envelope linear system is numerically singular (cusp or degenerate tangency)."""

    def __init__(self, message, condition_number=None):
        super().__init__(message)
        self.condition_number = condition_number


class ConicError(LimitShapeError, ValueError):
    """Base class for inscribed conic failures."""


class NotCircumscribingError(ConicError):
    """The six lines are not tangent to a common conic."""


class DegenerateConicError(ConicError):
    """The fitted conic is degenerate (a line pair, point pair or parabola)."""


class ConfigError(LimitShapeError, ValueError):
    """Run configuration is missing keys or violates a parameter domain."""
