"""
Exception hierarchy for scatter2d.

Input problems derive from ``ValueError`` so callers that already guard
against bad arguments keep working. Numerical failures derive from
``NumericalError`` and carry enough context in their message to tell which
point of a sweep failed.
"""


class Scatter2DError(Exception):
    """Base class for every error raised by scatter2d."""


class DomainError(Scatter2DError, ValueError):
    """An argument lies outside the domain of the requested function."""


class ConfigError(Scatter2DError, ValueError):
    """A run configuration could not be read or failed validation."""


class NumericalError(Scatter2DError):
    """A numerical procedure failed to produce a trustworthy value."""


class ConvergenceError(NumericalError):
    """Quadrature or integration did not reach the requested tolerance."""


class MatchingError(NumericalError):
    """The two-point matching determinant is too close to zero."""


class NoTurningPoint(NumericalError):
    """F_cl stays positive down to the innermost radius (plunging orbit)."""


class OrbitingDegenerate(NumericalError):
    """The turning point is a double root of F_cl (orbiting condition)."""


class NoClassicalBranch(NumericalError):
    """No impact parameter reaches the requested angle (dark side)."""


class CausticProximity(NumericalError):
    """A stationary point sits too close to a caustic for the SPA prefactor."""


class NoExtremum(NumericalError):
    """The deflection function has no interior extremum on the bracket."""
