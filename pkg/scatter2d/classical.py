"""
Classical layer: turning points, deflection functions and cross sections.

With E = k**2 and impact parameter b, the radial kinetic term is

    F(r) = k**2 - U(r) - k**2 * b**2 / r**2

and the deflection angle is

    Theta(b) = pi - 2*b*k * integral_{r0}^{inf} dr / (r**2 * sqrt(F(r)))

where r0 is the outermost root of F. The inverse square-root endpoint is
removed with r = r0 + u**2. Beyond ``pot.outer_radius`` the tail is done
analytically (free motion, or an exact 1/r tail for slow-decay potentials).

Sign convention: Theta > 0 for net repulsion, Theta < 0 for net attraction.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import solve_ivp
from scipy.optimize import brentq, minimize_scalar

from scatter2d.errors import (
    ConvergenceError,
    DomainError,
    NoClassicalBranch,
    NoTurningPoint,
    NumericalError,
    OrbitingDegenerate,
)
from scatter2d.logging_config import get_logger
from scatter2d.numerics import (
    centered_derivative,
    fd_step,
    integrate,
    one_sided_derivative,
)
from scatter2d.parallel import parallel_map
from scatter2d.potential import RadialPotential

logger = get_logger(__name__)

#: Points in the inward turning-point scan.
SCAN_POINTS = 4000
#: Innermost scanned radius, relative to the outer scan radius.
SCAN_FLOOR = 1e-8
ROOT_RTOL = 1e-12
#: |r0 * F'(r0)| below this times k**2 counts as a double root.
DEGENERATE_TOL = 1e-9
#: Branches closer than this in b are merged.
BRANCH_MERGE = 1e-9
#: |sin(theta)| below this makes the 3D per-steradian form divergent.
GLORY_SIN = 1e-12

_SMALL_U2 = 1e-10


def kinetic_term(pot: RadialPotential, k: float, b: float, r: ArrayLike):
    """F(r) = k**2 - U(r) - k**2 b**2 / r**2 (scalar or array)."""
    r = np.asarray(r, dtype=float)
    values = k * k - pot.evaluator(r) - (k * b) ** 2 / (r * r)
    return float(values) if values.ndim == 0 else values


def kinetic_slope(pot: RadialPotential, k: float, b: float, r: float) -> float:
    """dF/dr."""
    return -pot.gradient(r) + 2.0 * (k * b) ** 2 / r**3


def _check_kb(k: float, b: float) -> None:
    if not k > 0.0 or not math.isfinite(k):
        raise DomainError(f"k must be positive and finite, got {k}")
    if not b >= 0.0 or not math.isfinite(b):
        raise DomainError(f"b must be nonnegative and finite, got {b}")


def _scan_grid(pot: RadialPotential, b: float) -> NDArray[np.float64]:
    r_hi = 2.0 * max(pot.outer_radius, b) + 1.0
    return np.geomspace(r_hi, r_hi * SCAN_FLOOR, SCAN_POINTS)


def turning_point(pot: RadialPotential, k: float, b: float) -> float:
    """Outermost classical turning point r0 with F(r0) = 0.

    The radius is scanned inward on a geometric grid. The first sign change
    is refined with brentq. Local minima of F that stay positive on the grid
    are refined with a bounded minimiser to catch narrow forbidden regions
    near an orbiting barrier.

    Args:
        pot: Potential.
        k: Wavenumber.
        b: Impact parameter, b >= 0.

    Returns:
        float: r0.

    Raises:
        NoTurningPoint: F stays positive down to the scan floor.
        OrbitingDegenerate: r0 is a double root of F.
    """
    _check_kb(k, b)

    def f(r: float) -> float:
        return kinetic_term(pot, k, b, r)

    r = _scan_grid(pot, b)
    values = kinetic_term(pot, k, b, r)
    if values[0] <= 0.0:
        raise NoTurningPoint(
            f"{pot.label}: F <= 0 at r = {r[0]:.6g}, energy k**2 = {k * k:g} too low"
        )
    tiny = 1e-12 * k * k

    def simple_root(lo: float, hi: float) -> float:
        root = brentq(f, lo, hi, xtol=1e-300, rtol=ROOT_RTOL)
        if abs(root * kinetic_slope(pot, k, b, root)) < DEGENERATE_TOL * k * k:
            raise OrbitingDegenerate(
                f"Double turning point at r0 = {root:.12g} for b = {b:.12g}"
            )
        return float(root)

    for i in range(1, r.size):
        if values[i] <= 0.0:
            return simple_root(r[i], r[i - 1])
        if i + 1 < r.size and values[i] < values[i - 1] and values[i] <= values[i + 1]:
            res = minimize_scalar(
                f,
                bounds=(r[i + 1], r[i - 1]),
                method="bounded",
                options={"xatol": 1e-14 * r[i]},
            )
            if res.fun < -tiny:
                return simple_root(res.x, r[i - 1])
            if res.fun < tiny:
                raise OrbitingDegenerate(
                    f"F touches zero at r = {res.x:.12g} for b = {b:.12g}"
                )
    raise NoTurningPoint(
        f"{pot.label}: no turning point above r = {r[-1]:.3g} for b = {b:g}"
    )


def reduced_kernel(
    pot: RadialPotential, k: float, b: float, r0: float
) -> Callable[[float], float]:
    """G(u) = (F(r0 + u**2) - F(r0)) / u**2.

    G is smooth with G(0) = F'(r0), and u*sqrt(G) replaces sqrt(F) in the
    substituted integrals. Using the difference keeps the endpoint exact
    even though r0 carries the root-finder error.
    """
    slope0 = kinetic_slope(pot, k, b, r0)
    u_r0 = float(pot.evaluator(np.asarray(r0)))
    kb2 = (k * b) ** 2

    def kernel(u: float) -> float:
        u2 = u * u
        if u2 < _SMALL_U2 * max(r0, 1.0):
            return slope0
        r = r0 + u2
        if u2 < 1e-6 * max(r0, 1.0):
            du = pot.gradient(r0 + 0.5 * u2)
        else:
            du = (float(pot.evaluator(np.asarray(r))) - u_r0) / u2
        return -du + kb2 * (r + r0) / (r * r * r0 * r0)

    return kernel


def _interior_points(
    pot: RadialPotential, k: float, b: float, r0: float, r_out: float
) -> List[float]:
    """Break points in u = sqrt(r - r0): local minima of F and kinks of U."""
    radii = [p for p in pot.breakpoints if r0 < p < r_out]
    grid = np.geomspace(r0 * (1.0 + 1e-9) if r0 > 0.0 else 1e-9, r_out, 2000)
    values = kinetic_term(pot, k, b, grid)
    inner = values[1:-1]
    minima = np.nonzero((inner < values[:-2]) & (inner <= values[2:]))[0] + 1
    radii.extend(float(grid[i]) for i in minima)
    return sorted(math.sqrt(p - r0) for p in radii if p > r0)


def _tail_angle(pot: RadialPotential, k: float, b: float, radius: float) -> float:
    """b*k * integral_radius^inf dr / (r**2 sqrt(F)) for the outer region."""
    if pot.slow_decay and pot.coulomb_tail:
        alpha = pot.coulomb_tail / (k * k)
        d = math.sqrt(1.0 + alpha * alpha / (4.0 * b * b))
        t_out = min(1.0, (b / radius + alpha / (2.0 * b)) / d)
        t_inf = alpha / (2.0 * b * d)
        return math.asin(t_out) - math.asin(t_inf)
    return math.asin(min(1.0, b / radius))


def _deflection(pot: RadialPotential, k: float, b: float) -> Tuple[float, float]:
    _check_kb(k, b)
    if b == 0.0:
        try:
            r0 = turning_point(pot, k, 0.0)
        except NoTurningPoint:
            return 0.0, math.nan
        return math.pi, r0
    r0 = turning_point(pot, k, b)
    outer = pot.outer_radius
    if r0 >= outer:
        if pot.slow_decay and pot.coulomb_tail:
            alpha = pot.coulomb_tail / (k * k)
            return 2.0 * math.asin(alpha / math.sqrt(4.0 * b * b + alpha * alpha)), r0
        return 0.0, r0

    # The closed-form tail is singular at radius = b, so split away from r0.
    split = max(outer, 1.5 * r0)
    kernel = reduced_kernel(pot, k, b, r0)

    def integrand(u: float) -> float:
        r = r0 + u * u
        g = kernel(u)
        if g <= 0.0:
            g = 1e-300
        return 2.0 / (r * r * math.sqrt(g))

    inner = integrate(
        integrand,
        0.0,
        math.sqrt(split - r0),
        points=_interior_points(pot, k, b, r0, split),
        what=f"deflection integral at b={b:g}",
    )
    theta = math.pi - 2.0 * b * k * inner - 2.0 * _tail_angle(pot, k, b, split)
    return theta, r0


def deflection(pot: RadialPotential, k: float, b: float) -> float:
    """Classical deflection angle Theta(b).

    Args:
        pot: Potential.
        k: Wavenumber (E = k**2).
        b: Impact parameter, b >= 0.

    Returns:
        float: Theta in radians. Positive for repulsion. Values below -pi
        mean the trajectory wound around the centre.

    Raises:
        DomainError: k <= 0 or b < 0.
        NoTurningPoint: No turning point for b > 0.
        OrbitingDegenerate: b sits on an orbiting singularity.
        ConvergenceError: The quadrature did not converge.

    Example:
        >>> deflection(make_gaussian(0.0, 1.0), 1.0, 2.0)
        0.0
    """
    return _deflection(pot, k, b)[0]


@dataclass(frozen=True)
class DeflectionCurve:
    """Theta(b) sampled on an impact-parameter grid.

    Attributes:
        k (float): Wavenumber.
        bs (ndarray): Strictly increasing impact parameters.
        thetas_defl (ndarray): Theta per b, NaN where the evaluation failed.
        turning_points (ndarray): r0 per b, NaN where undefined.
        potential (RadialPotential): Potential the curve belongs to.
        failures (dict): b -> error message for the NaN entries.
    """

    k: float
    bs: NDArray[np.float64] = field(repr=False)
    thetas_defl: NDArray[np.float64] = field(repr=False)
    turning_points: NDArray[np.float64] = field(repr=False)
    potential: RadialPotential = field(repr=False)
    failures: Dict[float, str] = field(default_factory=dict, repr=False)


def default_b_grid(pot: RadialPotential, num: int = 400) -> NDArray[np.float64]:
    """Impact parameters covering the interaction region."""
    if pot.slow_decay and pot.tail_start:
        b_hi = 10.0 * pot.tail_start
    else:
        b_hi = 3.0 * pot.r_range
    return np.linspace(1e-3 * b_hi, b_hi, num)


def deflection_curve(
    pot: RadialPotential, k: float, b_grid: ArrayLike
) -> DeflectionCurve:
    """Evaluate Theta on every b of the grid, as a parallel map.

    Numerical failures become NaN gaps and are recorded in ``failures``.

    Raises:
        DomainError: Grid not strictly increasing or with negative b.
    """
    bs = np.asarray(b_grid, dtype=float)
    if bs.ndim != 1 or bs.size == 0:
        raise DomainError("b_grid must be a non-empty 1-D sequence")
    if np.any(np.diff(bs) <= 0.0) or bs[0] < 0.0:
        raise DomainError("b_grid must be strictly increasing and nonnegative")
    if not k > 0.0:
        raise DomainError(f"k must be positive, got {k}")

    def evaluate(b: float) -> Tuple[float, float, Optional[str]]:
        try:
            theta, r0 = _deflection(pot, k, float(b))
            return theta, r0, None
        except NumericalError as e:
            return math.nan, math.nan, str(e)

    results = parallel_map(evaluate, bs)
    failures = {float(b): msg for b, (_, _, msg) in zip(bs, results) if msg}
    for b, msg in failures.items():
        logger.warning("Deflection gap at b=%.6g: %s", b, msg)
    return DeflectionCurve(
        k=float(k),
        bs=bs,
        thetas_defl=np.array([t for t, _, _ in results]),
        turning_points=np.array([r for _, r, _ in results]),
        potential=pot,
        failures=failures,
    )


@dataclass(frozen=True)
class ClassicalBranch:
    """One solution b_j of a deflection equation with its slope dTheta/db."""

    b: float
    theta_defl: float
    dtheta_db: float


def deflection_slope(pot: RadialPotential, k: float, b: float) -> float:
    """dTheta/db by Richardson-refined differences, one-sided at the b = 0 edge."""

    def theta(x: float) -> float:
        return deflection(pot, k, x)

    h = fd_step(b)
    if b - h <= 0.0:
        return one_sided_derivative(theta, b, fd_step(b, 1e-5))
    return centered_derivative(theta, b, h)


def solve_deflection(
    curve: DeflectionCurve,
    target: Callable[[float], float],
) -> List[ClassicalBranch]:
    """All b on the curve where target(Theta(b)) changes sign, refined by brentq.

    ``target`` maps a deflection angle to a residual, e.g. ``abs(t) - theta``.
    Each bracket is refined on the full deflection function. Brackets whose
    refinement fails are skipped with a warning.
    """
    pot, k = curve.potential, curve.k
    residual = np.array([target(t) if np.isfinite(t) else math.nan for t in curve.thetas_defl])

    def g(b: float) -> float:
        return target(deflection(pot, k, b))

    roots: List[float] = []
    for i in range(curve.bs.size):
        if not np.isfinite(residual[i]):
            continue
        if residual[i] == 0.0:
            roots.append(float(curve.bs[i]))
            continue
        if i + 1 < curve.bs.size and np.isfinite(residual[i + 1]):
            if residual[i] * residual[i + 1] < 0.0:
                try:
                    roots.append(
                        float(brentq(g, curve.bs[i], curve.bs[i + 1], xtol=1e-14, rtol=ROOT_RTOL))
                    )
                except (NumericalError, ValueError) as e:
                    logger.warning(
                        "Skipping branch in [%.6g, %.6g]: %s", curve.bs[i], curve.bs[i + 1], e
                    )

    merged: List[float] = []
    for b in sorted(roots):
        if merged and abs(b - merged[-1]) < BRANCH_MERGE * max(1.0, b):
            continue
        merged.append(b)

    branches = []
    for b in merged:
        try:
            slope = deflection_slope(pot, k, b)
        except NumericalError as e:
            logger.warning("No slope at branch b=%.6g: %s", b, e)
            continue
        branches.append(ClassicalBranch(b=b, theta_defl=deflection(pot, k, b), dtheta_db=slope))
    return branches


@dataclass(frozen=True)
class ClassicalCrossSection:
    """Classical dsigma/dtheta at one angle.

    Attributes:
        theta (float): Scattering angle.
        value (float): Sum over branches of 1/|dTheta/db|. Zero on the dark side.
        branches (tuple): Contributing branches.
        dark_side (bool): True when no classical trajectory reaches theta.
    """

    theta: float
    value: float
    branches: Tuple[ClassicalBranch, ...]
    dark_side: bool = False


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not 0.0 < theta <= math.pi + 1e-12:
        raise DomainError(f"Scattering angle must lie in (0, pi], got {theta}")
    return theta


def classical_dcs_2d(
    curve: DeflectionCurve, theta: float, strict: bool = False
) -> ClassicalCrossSection:
    """Classical 2D cross section sum_j 1/|dTheta/db|_j over |Theta(b_j)| = theta.

    Args:
        curve: Deflection curve bracketing the branches.
        theta: Angle in (0, pi].
        strict: Raise instead of returning zero on the dark side.

    Raises:
        NoClassicalBranch: With ``strict`` when no branch reaches theta.
    """
    theta = _check_theta(theta)
    branches = solve_deflection(curve, lambda t: abs(t) - theta)
    if not branches:
        if strict:
            raise NoClassicalBranch(
                f"No classical trajectory reaches theta = {theta:.6g} "
                f"(max |Theta| on the grid is {np.nanmax(np.abs(curve.thetas_defl)):.6g})"
            )
        return ClassicalCrossSection(theta=theta, value=0.0, branches=(), dark_side=True)
    total = 0.0
    for branch in branches:
        if branch.dtheta_db == 0.0:
            logger.warning("Caustic at b=%.6g, theta=%.6g", branch.b, theta)
            total = math.inf
        else:
            total += 1.0 / abs(branch.dtheta_db)
    return ClassicalCrossSection(theta=theta, value=total, branches=tuple(branches))


def classical_total_2d(curve: Optional[DeflectionCurve], b_max: Optional[float] = None) -> float:
    """Classical total cross section 2*b_max (length units).

    ``b_max`` defaults to the largest b of the curve.
    """
    if b_max is None:
        if curve is None:
            raise DomainError("Either a curve or b_max is required")
        b_max = float(curve.bs[-1])
    if b_max < 0.0:
        raise DomainError(f"b_max must be nonnegative, got {b_max}")
    return 2.0 * b_max


def classical_total_3d(curve: Optional[DeflectionCurve], b_max: Optional[float] = None) -> float:
    """Classical 3D total cross section pi*b_max**2 (area units)."""
    return math.pi * (classical_total_2d(curve, b_max) / 2.0) ** 2


@dataclass(frozen=True)
class Classical3DComparison:
    """3D readings of the same deflection function.

    Attributes:
        per_steradian: sum_j b_j / (sin(theta) |dTheta/db|_j), inf at a glory.
        per_angle: sum_j 2*pi*b_j / |dTheta/db|_j.
        branches: Contributing branches.
        glory_divergent: True when sin(theta) vanishes with b_j > 0.
    """

    theta: float
    per_steradian: float
    per_angle: float
    branches: Tuple[ClassicalBranch, ...]
    glory_divergent: bool = False


def classical_dcs_3d_compare(curve: DeflectionCurve, theta: float) -> Classical3DComparison:
    """Evaluate the 3D classical cross sections for comparison with 2D.

    Raises:
        NoClassicalBranch: No branch reaches theta.
    """
    result = classical_dcs_2d(curve, theta, strict=True)
    sin_theta = math.sin(result.theta)
    per_angle = sum(2.0 * math.pi * br.b / abs(br.dtheta_db) for br in result.branches)
    glory = abs(sin_theta) < GLORY_SIN and any(br.b > 0.0 for br in result.branches)
    if glory:
        logger.warning("Glory divergence at theta=%.6g", result.theta)
        per_steradian = math.inf
    else:
        per_steradian = per_angle / (2.0 * math.pi * sin_theta)
    return Classical3DComparison(
        theta=result.theta,
        per_steradian=per_steradian,
        per_angle=per_angle,
        branches=result.branches,
        glory_divergent=glory,
    )


# ---------------------------------------------------------------------------
# Orbiting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitingInfo:
    """Orbiting singularity of Theta(b) at fixed k.

    Theta ~ c*ln((b - b0)/b0) above b0 and ~ 2c*ln((b0 - b)/b0) below.

    Attributes:
        exists (bool): Whether an unstable circular orbit exists at this energy.
        b0 (float): Orbiting impact parameter.
        r0 (float): Radius of the circular orbit.
        energy (float): k**2, the energy at which (b0, r0) orbit.
        log_coeff_above (float): Fitted c.
        log_coeff_below (float): Fitted 2c.
    """

    exists: bool
    b0: float = math.nan
    r0: float = math.nan
    energy: float = math.nan
    log_coeff_above: float = math.nan
    log_coeff_below: float = math.nan

    @property
    def coefficient_ratio(self) -> float:
        return self.log_coeff_below / self.log_coeff_above


def find_orbit(pot: RadialPotential, k: float) -> Optional[Tuple[float, float]]:
    """Locate the circular orbit (r0, b0) at energy k**2, if any.

    F and F' vanish together where h(r) = k**2 - U - r*U'/2 = 0 with U' > 0.
    The orbit is unstable (a barrier top of the effective potential) when
    F'' > 0 there.
    """
    if not k > 0.0:
        raise DomainError(f"k must be positive, got {k}")
    r = np.geomspace(pot.outer_radius, pot.outer_radius * 1e-6, SCAN_POINTS)
    grad = pot.derivative(r)
    h = k * k - pot.evaluator(r) - 0.5 * r * grad

    def h_scalar(x: float) -> float:
        return k * k - pot(x) - 0.5 * x * pot.gradient(x)

    for i in range(1, r.size):
        if grad[i] <= 0.0 or grad[i - 1] <= 0.0 or h[i] * h[i - 1] > 0.0:
            continue
        r0 = float(brentq(h_scalar, r[i], r[i - 1], xtol=1e-300, rtol=ROOT_RTOL))
        b0 = math.sqrt(pot.gradient(r0) * r0**3 / (2.0 * k * k))
        curvature = -centered_derivative(pot.gradient, r0) - 6.0 * (k * b0) ** 2 / r0**4
        if curvature > 0.0:
            return r0, b0
    return None


def detect_orbiting(
    pot: RadialPotential,
    k: float,
    b_grid: Optional[ArrayLike] = None,
    window: float = 0.05,
    min_samples: int = 5,
) -> OrbitingInfo:
    """Detect orbiting and fit the logarithmic divergence on both sides of b0.

    Args:
        pot: Potential.
        k: Wavenumber.
        b_grid: Impact parameters to fit with. Those within ``window`` (relative)
            of b0 are used. By default 10 geometric offsets from 1e-6 to 1e-3.
        window: Relative half-width of the fit window around b0.
        min_samples: Samples required on each side.

    Raises:
        ConvergenceError: Too few samples on either side of b0.
    """
    orbit = find_orbit(pot, k)
    if orbit is None:
        return OrbitingInfo(exists=False)
    r0, b0 = orbit
    if b_grid is None:
        offsets = np.geomspace(1e-6, 1e-3, 10)
        above, below = b0 * (1.0 + offsets), b0 * (1.0 - offsets)
    else:
        bs = np.asarray(b_grid, dtype=float)
        above = bs[(bs > b0) & (bs <= b0 * (1.0 + window))]
        below = bs[(bs < b0) & (bs >= b0 * (1.0 - window))]

    def fit(samples: NDArray[np.float64], side: str) -> float:
        xs, ys = [], []
        for b in samples:
            try:
                ys.append(deflection(pot, k, float(b)))
                xs.append(math.log(abs(b - b0) / b0))
            except NumericalError as e:
                logger.debug("Orbiting fit drops b=%.12g: %s", b, e)
        if len(xs) < min_samples:
            raise ConvergenceError(
                f"Orbiting fit {side} b0={b0:.8g} is ill-conditioned: "
                f"{len(xs)} usable samples, need {min_samples}"
            )
        return float(np.polyfit(xs, ys, 1)[0])

    info = OrbitingInfo(
        exists=True,
        b0=b0,
        r0=r0,
        energy=k * k,
        log_coeff_above=fit(above, "above"),
        log_coeff_below=fit(below, "below"),
    )
    logger.info(
        "Orbiting at k=%g: b0=%.8g r0=%.8g, c_above=%.4g c_below=%.4g",
        k,
        b0,
        r0,
        info.log_coeff_above,
        info.log_coeff_below,
    )
    return info


# ---------------------------------------------------------------------------
# Trajectory oracle
# ---------------------------------------------------------------------------


def trajectory_deflection(
    pot: RadialPotential,
    k: float,
    b: float,
    rtol: float = 1e-12,
    atol: float = 1e-12,
) -> float:
    """Deflection from direct integration of Hamilton's equations.

    H = p**2 + U(r), so dx/dt = 2p and dp/dt = -U'(r) x/r. The particle starts
    at (-sqrt(R**2 - b**2), b) with p = (k, 0) and stops when it leaves the
    circle of radius R. Theta is the polar angle of the final momentum.
    Unrelated to the quadrature path, this serves as an independent check.

    Raises:
        ConvergenceError: The integrator failed or never left the circle.
    """
    _check_kb(k, b)
    radius = 1.5 * max(pot.outer_radius, b) + 1.0
    state0 = [-math.sqrt(radius * radius - b * b), b, k, 0.0]

    def rhs(t: float, s: Sequence[float]) -> List[float]:
        x, y, px, py = s
        r = math.hypot(x, y)
        g = pot.gradient(r) / r if r > 0.0 else 0.0
        return [2.0 * px, 2.0 * py, -g * x, -g * y]

    def leave(t: float, s: Sequence[float]) -> float:
        return math.hypot(s[0], s[1]) - radius

    leave.terminal = True  # type: ignore[attr-defined]
    leave.direction = 1  # type: ignore[attr-defined]

    t_max = 200.0 * radius / k
    sol = solve_ivp(
        rhs, (0.0, t_max), state0, method="DOP853", rtol=rtol, atol=atol, events=leave
    )
    if sol.status != 1 or not sol.y_events[0].size:
        raise ConvergenceError(f"Trajectory at b={b:g} did not leave r={radius:g}: {sol.message}")
    _, _, px, py = sol.y_events[0][0]
    return math.atan2(py, px)
