"""
Special functions used across scatter2d.

- Bessel J_m and Neumann Y_m of nonnegative integer order, real argument
- Airy Ai of real argument

Each function has two evaluation paths:

Series
    Ascending (Maclaurin) series. The partial sums cancel heavily once the
    argument grows, so they are accumulated with mpmath at a working precision
    that grows with the argument: about 0.5*x extra digits for J and Y,
    0.6*|x|**1.5 for Ai.

Asymptotic
    Hankel expansion for J and Y, and the standard exponential and oscillatory
    expansions for Ai. These are summed up to their smallest term.

``EvaluationPath.AUTO`` uses the series below the crossover and the
asymptotic expansion above it. The crossover is ``bessel_crossover(m)`` =
max(12, 2m, m**2/20) for J and Y, and |x| = 6 for Ai. Near the crossover the
two paths agree to better than 1e-8.
"""

import math
from enum import Enum

import mpmath

from scatter2d.errors import DomainError

#: Y_m is rejected below this argument instead of returning -inf.
Y_X_MIN = 1e-12

AIRY_CROSSOVER = 6.0

#: Ai(0) = 3**(-2/3) / Gamma(2/3)
AI_ZERO = 0.35502805388781724

_ASYMPTOTIC_MAX_TERMS = 400


class EvaluationPath(str, Enum):
    """How a special function is evaluated."""

    SERIES = "series"
    ASYMPTOTIC = "asymptotic"
    AUTO = "auto"


def bessel_crossover(m: int) -> float:
    """Argument above which AUTO switches J_m and Y_m to the Hankel expansion."""
    return max(12.0, 2.0 * m, m * m / 20.0)


def _check_order(m: int) -> int:
    if isinstance(m, bool) or int(m) != m or m < 0:
        raise DomainError(f"Bessel order must be a nonnegative integer, got {m!r}")
    return int(m)


def _bessel_dps(x: float) -> int:
    return 20 + int(math.ceil(0.5 * x))


# ---------------------------------------------------------------------------
# Bessel J and Y
# ---------------------------------------------------------------------------


def _j_series(m: int, x: float) -> float:
    with mpmath.workdps(_bessel_dps(x)):
        half = mpmath.mpf(x) / 2
        q = -half * half
        term = half**m / mpmath.factorial(m)
        total = term
        peak = abs(term)
        eps = mpmath.mpf(10) ** (-mpmath.mp.dps)
        k = 0
        while True:
            k += 1
            term *= q / (k * (k + m))
            total += term
            peak = max(peak, abs(term))
            if k > half and abs(term) <= eps * peak:
                break
        return float(total)


def _y_series(m: int, x: float) -> float:
    with mpmath.workdps(_bessel_dps(x)):
        half = mpmath.mpf(x) / 2
        q = half * half
        finite = mpmath.mpf(0)
        for k in range(m):
            finite += mpmath.factorial(m - k - 1) / mpmath.factorial(k) * q**k
        leading = -finite / (mpmath.pi * half**m)

        term = 1 / mpmath.factorial(m)
        h_k = mpmath.mpf(0)
        h_mk = sum((mpmath.mpf(1) / j for j in range(1, m + 1)), mpmath.mpf(0))
        j_sum = term
        psi_sum = (h_k + h_mk) * term
        peak = abs(psi_sum) + abs(term)
        eps = mpmath.mpf(10) ** (-mpmath.mp.dps)
        k = 0
        while True:
            k += 1
            term *= -q / (k * (k + m))
            h_k += mpmath.mpf(1) / k
            h_mk += mpmath.mpf(1) / (k + m)
            j_sum += term
            contribution = (h_k + h_mk) * term
            psi_sum += contribution
            peak = max(peak, abs(contribution))
            if k > half and abs(contribution) <= eps * peak:
                break
        scale = half**m
        value = (
            leading
            + 2 / mpmath.pi * (mpmath.log(half) + mpmath.euler) * scale * j_sum
            - scale * psi_sum / mpmath.pi
        )
        return float(value)


def _hankel(m: int, x: float) -> tuple[float, float]:
    """Return (J_m(x), Y_m(x)) from the Hankel expansion."""
    mu = 4.0 * m * m
    p, q = 1.0, 0.0
    term = 1.0
    previous = 1.0
    decreasing = False
    for k in range(1, _ASYMPTOTIC_MAX_TERMS):
        term *= (mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        size = abs(term)
        if decreasing and size > previous:
            break
        if size < previous:
            decreasing = True
        phase = k % 4
        if phase == 1:
            q += term
        elif phase == 2:
            p -= term
        elif phase == 3:
            q -= term
        else:
            p += term
        if size < 1e-17 * (abs(p) + abs(q)):
            break
        previous = size
    chi = x - ((m % 4) / 2.0 + 0.25) * math.pi
    scale = math.sqrt(2.0 / (math.pi * x))
    c, s = math.cos(chi), math.sin(chi)
    return scale * (p * c - q * s), scale * (p * s + q * c)


def bessel_j(m: int, x: float, path: EvaluationPath = EvaluationPath.AUTO) -> float:
    """Bessel function of the first kind J_m(x).

    Args:
        m: Nonnegative integer order.
        x: Nonnegative argument.
        path: Evaluation path (see module docstring).

    Returns:
        float: J_m(x).

    Raises:
        DomainError: For negative or non-finite x, or a bad order.

    Example:
        >>> round(bessel_j(0, 1.0), 12)
        0.765197686558
    """
    m = _check_order(m)
    x = float(x)
    if not math.isfinite(x) or x < 0.0:
        raise DomainError(f"bessel_j requires finite x >= 0, got {x}")
    path = EvaluationPath(path)
    if path is EvaluationPath.AUTO:
        path = (
            EvaluationPath.ASYMPTOTIC
            if x >= bessel_crossover(m)
            else EvaluationPath.SERIES
        )
    if path is EvaluationPath.ASYMPTOTIC:
        if x == 0.0:
            raise DomainError("The Hankel expansion is undefined at x = 0")
        return _hankel(m, x)[0]
    return _j_series(m, x)


def bessel_y(m: int, x: float, path: EvaluationPath = EvaluationPath.AUTO) -> float:
    """Bessel function of the second kind (Neumann) Y_m(x).

    Args:
        m: Nonnegative integer order.
        x: Argument, at least ``Y_X_MIN``.
        path: Evaluation path (see module docstring).

    Returns:
        float: Y_m(x). Very high orders at tiny x overflow to -inf.

    Raises:
        DomainError: For x below ``Y_X_MIN`` (logarithmic singularity at 0).
    """
    m = _check_order(m)
    x = float(x)
    if not math.isfinite(x) or x < Y_X_MIN:
        raise DomainError(f"bessel_y requires finite x >= {Y_X_MIN}, got {x}")
    path = EvaluationPath(path)
    if path is EvaluationPath.AUTO:
        path = (
            EvaluationPath.ASYMPTOTIC
            if x >= bessel_crossover(m)
            else EvaluationPath.SERIES
        )
    if path is EvaluationPath.ASYMPTOTIC:
        return _hankel(m, x)[1]
    return _y_series(m, x)


# ---------------------------------------------------------------------------
# Airy Ai
# ---------------------------------------------------------------------------


def _airy_series(x: float) -> float:
    dps = 20 + int(math.ceil(0.6 * abs(x) ** 1.5))
    with mpmath.workdps(dps):
        xm = mpmath.mpf(x)
        x3 = xm**3
        c1 = 1 / (mpmath.cbrt(9) * mpmath.gamma(mpmath.mpf(2) / 3))
        c2 = 1 / (mpmath.cbrt(3) * mpmath.gamma(mpmath.mpf(1) / 3))
        f_term = mpmath.mpf(1)
        g_term = xm
        f_sum, g_sum = f_term, g_term
        peak = abs(f_term) + abs(g_term)
        eps = mpmath.mpf(10) ** (-mpmath.mp.dps)
        k = 0
        while True:
            k += 1
            f_term *= x3 / ((3 * k - 1) * (3 * k))
            g_term *= x3 / ((3 * k) * (3 * k + 1))
            f_sum += f_term
            g_sum += g_term
            size = abs(f_term) + abs(g_term)
            peak = max(peak, size)
            if 3 * k > abs(x) ** 1.5 and size <= eps * peak:
                break
        return float(c1 * f_sum - c2 * g_sum)


def _airy_u(count: int) -> list[float]:
    u = [1.0]
    for k in range(1, count):
        u.append(
            u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k)
        )
    return u


_AIRY_U = _airy_u(60)


def _airy_asymptotic(x: float) -> float:
    if x > 0.0:
        zeta = 2.0 / 3.0 * x**1.5
        total, previous = 1.0, 1.0
        for k in range(1, len(_AIRY_U)):
            term = (-1) ** k * _AIRY_U[k] / zeta**k
            if abs(term) > previous or abs(term) < 1e-17:
                break
            total += term
            previous = abs(term)
        return math.exp(-zeta) / (2.0 * math.sqrt(math.pi) * x**0.25) * total
    z = -x
    zeta = 2.0 / 3.0 * z**1.5
    even, odd = 1.0, 0.0
    previous = 1.0
    for k in range(1, len(_AIRY_U)):
        term = _AIRY_U[k] / zeta**k
        if term > previous or term < 1e-17:
            break
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2:
            odd += sign * term
        else:
            even += sign * term
        previous = term
    phase = zeta + math.pi / 4.0
    return (math.sin(phase) * even - math.cos(phase) * odd) / (
        math.sqrt(math.pi) * z**0.25
    )


def airy_ai(x: float, path: EvaluationPath = EvaluationPath.AUTO) -> float:
    """Airy function Ai(x) for real x.

    Args:
        x: Any finite real argument.
        path: Evaluation path (see module docstring).

    Returns:
        float: Ai(x).

    Example:
        >>> airy_ai(0.0)
        0.35502805388781724
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"airy_ai requires a finite argument, got {x}")
    path = EvaluationPath(path)
    if path is EvaluationPath.AUTO:
        path = (
            EvaluationPath.ASYMPTOTIC
            if abs(x) > AIRY_CROSSOVER
            else EvaluationPath.SERIES
        )
    if path is EvaluationPath.ASYMPTOTIC:
        if x == 0.0:
            raise DomainError("The Airy asymptotic expansions are undefined at x = 0")
        return _airy_asymptotic(x)
    if x == 0.0:
        return AI_ZERO
    return _airy_series(x)
