"""
Small numerical helpers shared by the classical and semiclassical layers.
"""

from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import quad

from scatter2d.errors import ConvergenceError
from scatter2d.logging_config import get_logger

logger = get_logger(__name__)

# Accepted outright; anything looser is logged, anything above FAIL raises.
QUAD_EPSABS = 1e-13
QUAD_EPSREL = 1e-12
QUAD_FAIL = 1e-7


def fd_step(x: float, scale: float = 1e-4) -> float:
    """Finite-difference step ``scale * max(|x|, 1)``."""
    return scale * max(abs(x), 1.0)


def centered_derivative(
    f: Callable[[float], float],
    x: float,
    h: Optional[float] = None,
    richardson: bool = True,
) -> float:
    """First derivative by centered differences.

    With ``richardson`` the steps h and h/2 are combined to cancel the h**2
    error term.

    Args:
        f: Scalar function.
        x: Evaluation point.
        h: Step, default ``fd_step(x)``.
        richardson: Apply one level of Richardson extrapolation.

    Returns:
        float: Estimate of f'(x).
    """
    if h is None:
        h = fd_step(x)
    d_h = (f(x + h) - f(x - h)) / (2.0 * h)
    if not richardson:
        return d_h
    half = 0.5 * h
    d_half = (f(x + half) - f(x - half)) / (2.0 * half)
    return (4.0 * d_half - d_h) / 3.0


def one_sided_derivative(f: Callable[[float], float], x: float, h: float) -> float:
    """Second-order forward difference, for points on a domain edge."""
    return (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h)


def second_difference(
    f: Callable[[float], float],
    x: float,
    h: Optional[float] = None,
    richardson: bool = True,
    f0: Optional[float] = None,
) -> float:
    """Second derivative by the three-point stencil, optionally Richardson-refined."""
    if h is None:
        h = fd_step(x)
    fx = f(x) if f0 is None else f0
    d_h = (f(x + h) - 2.0 * fx + f(x - h)) / (h * h)
    if not richardson:
        return d_h
    half = 0.5 * h
    d_half = (f(x + half) - 2.0 * fx + f(x - half)) / (half * half)
    return (4.0 * d_half - d_h) / 3.0


def integrate(
    integrand: Callable[[float], float],
    lower: float,
    upper: float,
    points: Optional[Sequence[float]] = None,
    what: str = "integral",
    epsabs: float = QUAD_EPSABS,
    epsrel: float = QUAD_EPSREL,
) -> float:
    """Adaptive Gauss-Kronrod quadrature with an explicit convergence check.

    Args:
        integrand: Scalar integrand.
        lower: Lower limit.
        upper: Upper limit (finite).
        points: Interior break points (kinks, narrow peaks).
        what: Label used in log and error messages.
        epsabs: Absolute tolerance.
        epsrel: Relative tolerance.

    Returns:
        float: Value of the integral.

    Raises:
        ConvergenceError: If the error estimate exceeds ``QUAD_FAIL``.
    """
    if upper <= lower:
        return 0.0
    inner = None
    if points is not None:
        inner = [p for p in points if lower < p < upper] or None
    value, abserr, infodict, *rest = quad(
        integrand,
        lower,
        upper,
        epsabs=epsabs,
        epsrel=epsrel,
        limit=400,
        points=inner,
        full_output=1,
    )
    if not np.isfinite(value):
        raise ConvergenceError(f"{what}: non-finite quadrature result on [{lower}, {upper}]")
    if rest:
        tolerance = max(epsabs, epsrel * abs(value))
        if abserr > QUAD_FAIL * max(1.0, abs(value)):
            raise ConvergenceError(
                f"{what}: quadrature error estimate {abserr:.3e} on [{lower}, {upper}]"
            )
        if abserr > tolerance * 1e3:
            logger.warning("%s: relaxed quadrature accuracy %.3e (%s)", what, abserr, rest[0])
    return float(value)
