"""
Semiclassical layer.

- WKB phase shifts and wavefunctions with the Langer-corrected F
  (k**2 - U - m**2/r**2), so Theta = 2 d(delta)/dm reproduces the classical
  deflection function
- Eikonal (straight-line) phases and the eikonal amplitude integral
- Stationary-phase (SPA) amplitudes from the branches of Theta(m) = -/+ theta - 2 kappa pi
- Rainbow location and the Airy uniform approximation around it
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import brentq, minimize_scalar

from scatter2d.classical import (
    DeflectionCurve,
    default_b_grid,
    deflection,
    deflection_curve,
    find_orbit,
    reduced_kernel,
    solve_deflection,
    turning_point,
)
from scatter2d.errors import (
    CausticProximity,
    DomainError,
    NoExtremum,
    NoTurningPoint,
    NumericalError,
)
from scatter2d.logging_config import get_logger
from scatter2d.numerics import (
    centered_derivative,
    fd_step,
    integrate,
    one_sided_derivative,
    second_difference,
)
from scatter2d.parallel import parallel_map
from scatter2d.potential import RadialPotential
from scatter2d.quantum import (
    AngularDistribution,
    DistributionMethod,
    PhaseMethod,
    PhaseShiftTable,
)
from scatter2d.specfun import airy_ai

logger = get_logger(__name__)

#: |dTheta/dm| below this is too close to a caustic for the SPA.
SLOPE_FLOOR = 1e-6
#: Gauss-Legendre nodes per panel of the eikonal integral.
EIKONAL_NODES = 20
#: Airy formulas are trusted within this fraction of theta_r around theta_r.
AIRY_WINDOW = 0.5
#: Number of windings searched by default when orbiting is present.
ORBITING_KAPPA = 3

DeltaSource = Union[RadialPotential, PhaseShiftTable, Callable[[float], float]]


# ---------------------------------------------------------------------------
# WKB
# ---------------------------------------------------------------------------


def _check_k(k: float) -> None:
    if not k > 0.0 or not math.isfinite(k):
        raise DomainError(f"k must be positive and finite, got {k}")


def _wkb_turning_point(pot: RadialPotential, k: float, m: float) -> float:
    """Outermost root of k**2 - U - m**2/r**2; 0 for m = 0 with none."""
    if m < 0.0:
        raise DomainError(f"m must be nonnegative, got {m}")
    try:
        return turning_point(pot, k, m / k)
    except NoTurningPoint:
        if m == 0.0:
            return 0.0
        raise


def _free_tail(k: float, m: float, radius: float) -> float:
    """Closed form of integral_radius^inf (sqrt(k**2 - m**2/r**2) - k) dr - m*pi/2 + m*arccos(m/kR)."""
    kr = k * radius
    root = math.sqrt(max(kr * kr - m * m, 0.0))
    gap = -m * m / (root + kr) if kr > 0.0 else 0.0
    return -m * math.pi / 2.0 - gap + m * math.acos(min(1.0, m / kr))


def wkb_phase_shift(pot: RadialPotential, k: float, m: float) -> float:
    """Absolute WKB phase shift.

    delta_m = m*pi/2 + integral_{r0}^{inf} (sqrt(F) - k) dr - k*r0, with
    F = k**2 - U - m**2/r**2. Beyond ``pot.outer_radius`` the integral is free
    and done in closed form. m may be non-integer.

    Returns:
        float: delta_m, not reduced modulo pi.

    Raises:
        NoTurningPoint: m > 0 with no turning point.
    """
    _check_k(k)
    m = float(m)
    r0 = _wkb_turning_point(pot, k, m)
    outer = pot.outer_radius
    if r0 >= outer:
        return 0.0
    b = m / k
    if r0 > 0.0:
        kernel = reduced_kernel(pot, k, b, r0)

        def integrand(u: float) -> float:
            return 2.0 * u * (u * math.sqrt(max(kernel(u), 0.0)) - k)

        inner = integrate(
            integrand,
            0.0,
            math.sqrt(outer - r0),
            points=[math.sqrt(p - r0) for p in pot.breakpoints if r0 < p < outer],
            what=f"WKB phase m={m:g}",
        )
    else:

        def integrand(r: float) -> float:
            return math.sqrt(max(k * k - pot(r), 0.0)) - k

        inner = integrate(integrand, 0.0, outer, points=pot.breakpoints, what="WKB phase m=0")
    return m * math.pi / 2.0 + inner + _free_tail(k, m, outer) - k * r0


def wkb_phase_table(pot: RadialPotential, k: float, m_max: int) -> PhaseShiftTable:
    """WKB phase shifts for m = 0..m_max, as a parallel map."""
    deltas = parallel_map(lambda m: wkb_phase_shift(pot, k, m), range(int(m_max) + 1))
    return PhaseShiftTable(k=k, deltas=tuple(deltas), method=PhaseMethod.WKB)


def deflection_from_wkb(pot: RadialPotential, k: float, m: float) -> float:
    """Theta(m) = 2 d(delta)/dm by Richardson-refined differences, one-sided at the m = 0 edge."""

    def delta(x: float) -> float:
        return wkb_phase_shift(pot, k, x)

    m = float(m)
    h = fd_step(m)
    if m - h <= 0.0:
        return 2.0 * one_sided_derivative(delta, m, fd_step(m, 1e-5))
    return 2.0 * centered_derivative(delta, m, h)


def wkb_wavefunction(
    pot: RadialPotential, k: float, m: float, r_grid: ArrayLike
) -> NDArray[np.float64]:
    """Outgoing-region WKB solution F**(-1/4) cos(integral_{r0}^r sqrt(F) - pi/4).

    Raises:
        DomainError: A point at or inside the turning point.
    """
    _check_k(k)
    m = float(m)
    rs = np.asarray(r_grid, dtype=float)
    r0 = _wkb_turning_point(pot, k, m)
    if np.any(rs <= r0):
        raise DomainError(f"WKB wavefunction is only defined beyond r0 = {r0:.6g}")
    b = m / k

    def f(r: float) -> float:
        return k * k - float(pot(r)) - (m / r) ** 2

    order = np.argsort(rs)
    phases = np.empty_like(rs)
    if r0 > 0.0:
        kernel = reduced_kernel(pot, k, b, r0)

        def first(u: float) -> float:
            return 2.0 * u * u * math.sqrt(max(kernel(u), 0.0))

        previous = r0
        accumulated = 0.0
        for n, idx in enumerate(order):
            r = rs[idx]
            if n == 0:
                accumulated = integrate(first, 0.0, math.sqrt(r - r0), what="WKB phase")
            else:
                accumulated += integrate(
                    lambda x: math.sqrt(max(f(x), 0.0)), previous, r, what="WKB phase"
                )
            phases[idx] = accumulated
            previous = r
    else:
        previous, accumulated = 0.0, 0.0
        for idx in order:
            r = rs[idx]
            accumulated += integrate(
                lambda x: math.sqrt(max(k * k - float(pot(x)), 0.0)), previous, r, what="WKB phase"
            )
            phases[idx] = accumulated
            previous = r
    local = np.array([f(r) for r in rs])
    return local**-0.25 * np.cos(phases - math.pi / 4.0)


# ---------------------------------------------------------------------------
# Eikonal
# ---------------------------------------------------------------------------


def eikonal_phase(pot: RadialPotential, k: float, b: float) -> float:
    """Straight-line phase delta(b) = -(1/2k) integral_b^inf r U(r) / sqrt(r**2 - b**2) dr.

    Computed with r = b*cosh(u), which removes the endpoint singularity. At
    b = 0 this is -(1/2k) integral_0^inf U dr.
    """
    _check_k(k)
    if b < 0.0:
        raise DomainError(f"b must be nonnegative, got {b}")
    outer = pot.outer_radius
    if b == 0.0:
        value = integrate(lambda r: float(pot(r)), 0.0, outer, points=pot.breakpoints, what="eikonal phase")
        return -value / (2.0 * k)
    if b >= outer:
        return 0.0
    u_max = math.acosh(outer / b)
    points = [math.acosh(p / b) for p in pot.breakpoints if b < p < outer]

    def integrand(u: float) -> float:
        r = b * math.cosh(u)
        return r * float(pot(r))

    return -integrate(integrand, 0.0, u_max, points=points, what=f"eikonal phase b={b:g}") / (2.0 * k)


def gaussian_eikonal_phase(U0: float, a: float, k: float, b: float) -> float:
    """Closed form of the eikonal phase for U0*exp(-r**2/a**2)."""
    return -U0 * a * math.sqrt(math.pi) / (4.0 * k) * math.exp(-(b * b) / (a * a))


def eikonal_phase_table(pot: RadialPotential, k: float, m_max: int) -> PhaseShiftTable:
    """delta_m = eikonal_phase(b = m/k) for m = 0..m_max."""
    deltas = parallel_map(lambda m: eikonal_phase(pot, k, m / k), range(int(m_max) + 1))
    return PhaseShiftTable(k=k, deltas=tuple(deltas), method=PhaseMethod.EIKONAL)


def eikonal_amplitude(
    pot: RadialPotential, k: float, theta: float, b_max: Optional[float] = None
) -> complex:
    """Eikonal amplitude -ik sqrt(2/pi) integral_0^b_max cos(k b theta)(e^{2i delta(b)} - 1) db.

    The prefactor follows from replacing the sum over eps_m in the partial-wave
    amplitude by 2k integral db, so both amplitudes share one normalisation.

    The integral is split into Gauss-Legendre panels no wider than an eighth
    of the oscillation period 2*pi/(k*theta) and a sixteenth of b_max.

    Raises:
        DomainError: b_max inside the potential range.
    """
    _check_k(k)
    outer = pot.outer_radius
    if b_max is None:
        b_max = outer
    if b_max < outer * (1.0 - 1e-12):
        raise DomainError(f"b_max = {b_max:g} lies inside the potential range {outer:g}")
    width = b_max / 16.0
    if theta > 0.0:
        width = min(width, 2.0 * math.pi / (k * theta) / 8.0)
    panels = max(1, int(math.ceil(b_max / width)))
    nodes, weights = np.polynomial.legendre.leggauss(EIKONAL_NODES)
    edges = np.linspace(0.0, b_max, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    bs = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    ws = (half[:, None] * weights[None, :]).ravel()
    deltas = np.array([eikonal_phase(pot, k, float(b)) for b in bs])
    integrand = np.cos(k * bs * theta) * (np.exp(2j * deltas) - 1.0)
    tail = abs(eikonal_phase(pot, k, b_max))
    if tail > 1e-8:
        logger.warning("Eikonal truncation at b_max=%g leaves |delta| = %.3e", b_max, tail)
    return complex(-1j * k * math.sqrt(2.0 / math.pi) * np.sum(ws * integrand))


def align_branches(table: PhaseShiftTable) -> PhaseShiftTable:
    """Unwrap a principal-value table into a continuous function of m.

    The branch is fixed at the high-m tail, where delta_m goes to zero.
    """
    deltas = np.unwrap(table.as_array(), period=math.pi)
    deltas = deltas - math.pi * round(float(deltas[-1]) / math.pi)
    return PhaseShiftTable(k=table.k, deltas=tuple(float(d) for d in deltas), method=table.method)


# ---------------------------------------------------------------------------
# Stationary phase
# ---------------------------------------------------------------------------


class AmplitudeSign(str, Enum):
    """Which of f(+) (Theta = -theta - 2 kappa pi) or f(-) a branch belongs to."""

    PLUS = "+"
    MINUS = "-"


@dataclass(frozen=True)
class StationaryBranch:
    """A stationary point m_s of the partial-wave phase at angle theta.

    Attributes:
        m (float): m_s = k*b_s.
        sign (AmplitudeSign): Amplitude the point contributes to.
        kappa (int): Winding number.
        dtheta_dm (float): dTheta/dm at m_s.
    """

    m: float
    sign: AmplitudeSign
    kappa: int
    dtheta_dm: float


@dataclass(frozen=True)
class BranchSet:
    """All stationary points at one angle."""

    theta: float
    k: float
    branches: Tuple[StationaryBranch, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.branches)


def _as_curve(source: Union[DeflectionCurve, Tuple[RadialPotential, float]]) -> DeflectionCurve:
    if isinstance(source, DeflectionCurve):
        return source
    pot, k = source
    return deflection_curve(pot, k, default_b_grid(pot))


def stationary_points(
    source: Union[DeflectionCurve, Tuple[RadialPotential, float]],
    theta: float,
    kappa_max: Optional[int] = None,
) -> BranchSet:
    """Solve Theta(m) = -s*theta - 2*kappa*pi for s = +/-1, kappa = 0..kappa_max.

    Args:
        source: A deflection curve, or (potential, k) to build one on the
            default grid.
        theta: Angle in (0, pi].
        kappa_max: Largest winding number. Defaults to 0, or 3 when the
            potential orbits at this energy.
    """
    if not 0.0 < theta <= math.pi + 1e-12:
        raise DomainError(f"Scattering angle must lie in (0, pi], got {theta}")
    curve = _as_curve(source)
    if kappa_max is None:
        kappa_max = ORBITING_KAPPA if find_orbit(curve.potential, curve.k) else 0
    branches: List[StationaryBranch] = []
    for kappa in range(int(kappa_max) + 1):
        for sign in (AmplitudeSign.PLUS, AmplitudeSign.MINUS):
            s = 1.0 if sign is AmplitudeSign.PLUS else -1.0
            target = -s * theta - 2.0 * kappa * math.pi
            for br in solve_deflection(curve, lambda t: t - target):
                branches.append(
                    StationaryBranch(
                        m=curve.k * br.b, sign=sign, kappa=kappa, dtheta_dm=br.dtheta_db / curve.k
                    )
                )
    return BranchSet(theta=float(theta), k=curve.k, branches=tuple(branches))


def _delta_function(source: DeltaSource, k: float) -> Callable[[float], float]:
    if isinstance(source, RadialPotential):
        return lambda m: wkb_phase_shift(source, k, m)
    if isinstance(source, PhaseShiftTable):
        deltas = align_branches(source).as_array()
        grid = np.arange(deltas.size, dtype=float)
        return lambda m: float(np.interp(m, grid, deltas))
    return source


def spa_amplitude(
    branches: BranchSet,
    delta_source: DeltaSource,
    k: Optional[float] = None,
    slope_floor: float = SLOPE_FLOOR,
) -> complex:
    """Stationary-phase amplitude summed over all branches.

    Each branch adds |dTheta/dm|**(-1/2) exp(i(+/- m theta + 2 kappa pi m + 2 delta(m) + pi/4)).
    A negative slope flips the Fresnel factor to exp(-i pi/4), i.e. an extra
    -pi/2.

    Raises:
        CausticProximity: A branch slope below ``slope_floor``.
    """
    k = branches.k if k is None else k
    delta = _delta_function(delta_source, k)
    total = 0j
    for br in branches.branches:
        if abs(br.dtheta_dm) < slope_floor:
            raise CausticProximity(
                f"|dTheta/dm| = {abs(br.dtheta_dm):.3e} at m = {br.m:.6g} is below {slope_floor:g}"
            )
        s = 1.0 if br.sign is AmplitudeSign.PLUS else -1.0
        phase = (
            s * br.m * branches.theta
            + 2.0 * math.pi * br.kappa * br.m
            + 2.0 * delta(br.m)
            + math.pi / 4.0
        )
        if br.dtheta_dm < 0.0:
            phase -= math.pi / 2.0
        total += np.exp(1j * phase) / math.sqrt(abs(br.dtheta_dm))
    return complex(total)


def two_branch_dcs(
    b1: float,
    b2: float,
    db1: float,
    db2: float,
    delta1: float,
    delta2: float,
    k: float,
    theta: ArrayLike,
) -> Union[float, NDArray[np.float64]]:
    """Two-branch interference cross section.

    |db1/dtheta| + |db2/dtheta| + 2 sqrt(|db1 db2|) sin(k(b1-b2) theta + 2(delta1-delta2)).
    With the SPA convention above, b1 is the negative-slope branch.

    Raises:
        DomainError: Coincident branches.
    """
    if b1 == b2:
        raise DomainError("two_branch_dcs needs two distinct branches")
    theta = np.asarray(theta, dtype=float)
    cross = 2.0 * math.sqrt(abs(db1 * db2)) * np.sin(
        k * (b1 - b2) * theta + 2.0 * (delta1 - delta2)
    )
    value = abs(db1) + abs(db2) + cross
    return float(value) if value.ndim == 0 else value


def semiclassical_dcs(
    curve: DeflectionCurve,
    thetas: ArrayLike,
    delta_source: Optional[DeltaSource] = None,
    kappa_max: Optional[int] = None,
    slope_floor: float = SLOPE_FLOOR,
) -> AngularDistribution:
    """|f(+) + f(-)|**2 / k from the stationary points, over an angle grid.

    Angles too close to a caustic are NaN. The dark side is 0.
    """
    thetas = np.asarray(thetas, dtype=float)
    source = curve.potential if delta_source is None else delta_source
    if kappa_max is None:
        kappa_max = ORBITING_KAPPA if find_orbit(curve.potential, curve.k) else 0

    def evaluate(theta: float) -> float:
        points = stationary_points(curve, float(theta), kappa_max)
        plus = BranchSet(
            theta=points.theta,
            k=points.k,
            branches=tuple(b for b in points.branches if b.sign is AmplitudeSign.PLUS),
        )
        minus = BranchSet(
            theta=points.theta,
            k=points.k,
            branches=tuple(b for b in points.branches if b.sign is AmplitudeSign.MINUS),
        )
        try:
            f = spa_amplitude(plus, source, curve.k, slope_floor) + spa_amplitude(
                minus, source, curve.k, slope_floor
            )
        except CausticProximity as e:
            logger.info("SPA gap at theta=%.6g: %s", theta, e)
            return math.nan
        return abs(f) ** 2 / curve.k

    values = parallel_map(evaluate, thetas)
    return AngularDistribution(
        thetas=thetas, values=np.asarray(values), method=DistributionMethod.SPA_INTERFERENCE
    )


# ---------------------------------------------------------------------------
# Rainbow and Airy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RainbowInfo:
    """Extremum of Theta(m).

    Attributes:
        m_r (float): Rainbow partial wave.
        b_r (float): m_r / k.
        theta_r (float): |Theta(m_r)|.
        theta_dd (float): d2 Theta/dm2 at m_r.
        deflection_sign (int): Sign of Theta(m_r); -1 means an attractive rainbow.
    """

    m_r: float
    b_r: float
    theta_r: float
    theta_dd: float
    deflection_sign: int


def find_rainbow(
    pot: RadialPotential,
    k: float,
    b_bracket: Optional[Tuple[float, float]] = None,
    samples: int = 41,
) -> RainbowInfo:
    """Locate the extremum of Theta(m) inside a bracket of impact parameters.

    A coarse scan picks the interior extremum with the largest |Theta|. A
    bounded minimiser refines it and brentq on dTheta/dm polishes it.

    Raises:
        NoExtremum: Theta is monotone on the bracket.
    """
    _check_k(k)
    if b_bracket is None:
        grid = default_b_grid(pot)
        b_bracket = (float(grid[0]), float(grid[-1]))
    b_lo, b_hi = b_bracket
    if not 0.0 <= b_lo < b_hi:
        raise DomainError(f"Bad impact-parameter bracket {b_bracket}")

    def theta(m: float) -> float:
        return deflection(pot, k, m / k)

    ms = np.linspace(k * b_lo, k * b_hi, samples)

    def safe(m: float) -> float:
        try:
            return theta(m)
        except NumericalError:
            return math.nan

    values = np.array(parallel_map(safe, ms))
    if np.all(np.isnan(values)):
        raise NoExtremum("Deflection undefined on the whole bracket")
    if np.nanmax(values) - np.nanmin(values) < 1e-9:
        raise NoExtremum(f"Theta is flat on b in [{b_lo:g}, {b_hi:g}] at k={k:g}")
    candidates = []
    for idx in (int(np.nanargmax(values)), int(np.nanargmin(values))):
        if not 0 < idx < samples - 1:
            continue
        # A plateau (Theta = 0 beyond the range) is not an extremum.
        left, right = values[idx - 1] - values[idx], values[idx + 1] - values[idx]
        if left * right > 0.0:
            candidates.append(idx)
    if not candidates:
        raise NoExtremum(
            f"Theta is monotone on b in [{b_lo:g}, {b_hi:g}] at k={k:g}; no rainbow"
        )
    idx = max(candidates, key=lambda i: abs(values[i]))
    s = 1.0 if values[idx] >= values[idx - 1] else -1.0
    lo, hi = float(ms[idx - 1]), float(ms[idx + 1])
    res = minimize_scalar(
        lambda m: -s * theta(m), bounds=(lo, hi), method="bounded", options={"xatol": 1e-10 * hi}
    )

    def slope(m: float) -> float:
        return centered_derivative(theta, m, fd_step(m, 1e-4))

    m_r = float(res.x)
    try:
        m_r = float(brentq(slope, lo, hi, xtol=1e-14, rtol=1e-13))
    except ValueError:
        logger.debug("Rainbow polish skipped, slope keeps its sign on [%g, %g]", lo, hi)
    span = ms[-1] - ms[0]
    if min(m_r - ms[0], ms[-1] - m_r) < 1e-6 * span:
        raise NoExtremum(f"Extremum at the bracket edge m = {m_r:.6g}")
    theta_r = theta(m_r)
    theta_dd = second_difference(theta, m_r, fd_step(m_r, 1e-3), f0=theta_r)
    info = RainbowInfo(
        m_r=m_r,
        b_r=m_r / k,
        theta_r=abs(theta_r),
        theta_dd=theta_dd,
        deflection_sign=1 if theta_r > 0.0 else -1,
    )
    logger.info(
        "Rainbow at k=%g: b_r=%.8g theta_r=%.8g theta''=%.4g", k, info.b_r, info.theta_r, theta_dd
    )
    return info


def _airy_scale(info: RainbowInfo, k: float) -> Tuple[float, float]:
    """(|Theta_bb|, z/(theta - theta_r)) for the Airy argument."""
    theta_bb = abs(k * k * info.theta_dd)
    if theta_bb == 0.0:
        raise CausticProximity("Vanishing curvature at the rainbow")
    return theta_bb, 2.0 ** (1.0 / 3.0) * k ** (2.0 / 3.0) / theta_bb ** (1.0 / 3.0)


@dataclass(frozen=True)
class AiryCrossSection:
    """Airy dsigma/dtheta with its validity window flag."""

    theta: float
    value: float
    in_window: bool


def airy_amplitude_dcs(
    info: RainbowInfo, k: float, theta: float, window: float = AIRY_WINDOW
) -> AiryCrossSection:
    """Uniform Airy cross section around the rainbow angle.

    dsigma/dtheta = 2**(5/3) k**(1/3) pi / |Theta_bb|**(2/3) * Ai(z)**2 with
    z = 2**(1/3) k**(2/3) (theta - theta_r) / |Theta_bb|**(1/3) and
    Theta_bb = k**2 Theta''(m_r). Outside |theta - theta_r| <= window*theta_r
    the value is still returned, flagged and logged.
    """
    _check_k(k)
    theta_bb, scale = _airy_scale(info, k)
    z = scale * (theta - info.theta_r)
    value = 2.0 ** (5.0 / 3.0) * k ** (1.0 / 3.0) * math.pi / theta_bb ** (2.0 / 3.0) * airy_ai(z) ** 2
    inside = abs(theta - info.theta_r) <= window * info.theta_r
    if not inside:
        logger.warning(
            "Airy approximation used at theta=%.6g, outside its window around theta_r=%.6g",
            theta,
            info.theta_r,
        )
    return AiryCrossSection(theta=float(theta), value=value, in_window=inside)


def airy_dcs_curve(info: RainbowInfo, k: float, thetas: ArrayLike) -> AngularDistribution:
    """Airy cross section on an angle grid."""
    thetas = np.asarray(thetas, dtype=float)
    values = [airy_amplitude_dcs(info, k, float(t)).value for t in thetas]
    return AngularDistribution(thetas=thetas, values=np.asarray(values), method=DistributionMethod.AIRY)


def airy_amplitude(
    info: RainbowInfo, k: float, theta: float, delta_source: DeltaSource
) -> complex:
    """Complex Airy amplitude.

    The modulus is sqrt(k * dsigma/dtheta). The phase is the stationary value
    +/- m_r theta + 2 delta(m_r) + pi/4 of the rainbow branch.
    """
    delta = _delta_function(delta_source, k)
    magnitude = math.sqrt(k * airy_amplitude_dcs(info, k, theta).value)
    s = 1.0 if info.deflection_sign < 0 else -1.0
    phase = s * info.m_r * theta + 2.0 * delta(info.m_r) + math.pi / 4.0
    return complex(magnitude * np.exp(1j * phase))


def airy_dark_side_dcs(info: RainbowInfo, k: float, theta: float) -> float:
    """Exponential tail beyond the rainbow (theta > theta_r).

    Raises:
        DomainError: theta <= theta_r.
    """
    if theta <= info.theta_r:
        raise DomainError(f"Dark side requires theta > theta_r = {info.theta_r:.6g}")
    theta_bb = abs(k * k * info.theta_dd)
    x = theta - info.theta_r
    exponent = 4.0 * k * math.sqrt(2.0) / 3.0 * x**1.5 / math.sqrt(theta_bb)
    return math.exp(-exponent) / (math.sqrt(2.0) * math.sqrt(theta_bb) * math.sqrt(x))


def _bright_phase(info: RainbowInfo, k: float, theta: float) -> float:
    theta_bb = abs(k * k * info.theta_dd)
    return 2.0 * k * math.sqrt(2.0) / 3.0 * (info.theta_r - theta) ** 1.5 / math.sqrt(theta_bb)


def airy_bright_side_dcs(info: RainbowInfo, k: float, theta: float) -> float:
    """Oscillating form on the lit side (theta < theta_r).

    Raises:
        DomainError: theta >= theta_r.
    """
    if theta >= info.theta_r:
        raise DomainError(f"Bright side requires theta < theta_r = {info.theta_r:.6g}")
    theta_bb = abs(k * k * info.theta_dd)
    g = _bright_phase(info, k, theta)
    return (
        2.0
        * math.sqrt(2.0)
        * math.sin(g + math.pi / 4.0) ** 2
        / (math.sqrt(theta_bb) * math.sqrt(info.theta_r - theta))
    )


def airy_supernumerary_angles(info: RainbowInfo, k: float, count: int = 5) -> List[float]:
    """Maxima of the lit-side form, moving away from theta_r."""
    theta_bb = abs(k * k * info.theta_dd)
    angles = []
    for n in range(count):
        g = math.pi / 4.0 + n * math.pi
        x = (3.0 * g * math.sqrt(theta_bb) / (2.0 * k * math.sqrt(2.0))) ** (2.0 / 3.0)
        angles.append(info.theta_r - x)
    return angles


@dataclass(frozen=True)
class RainbowPeriods:
    """Oscillation period of the lit side, from the local and two-branch pictures."""

    local: float
    uniform: float
    m1: float
    m2: float


def rainbow_periods(info: RainbowInfo, k: float, theta: float) -> RainbowPeriods:
    """Local period pi|Theta''|**(1/2) / (sqrt 2 sqrt(theta_r - theta)) and 2 pi/|m1 - m2|.

    m1, m2 = m_r +/- sqrt(2(theta_r - theta)/|Theta''|) are the quadratic
    branches; both readings coincide.

    Raises:
        DomainError: theta >= theta_r.
    """
    if theta >= info.theta_r:
        raise DomainError(f"Periods are defined for theta < theta_r = {info.theta_r:.6g}")
    curvature = abs(info.theta_dd)
    gap = info.theta_r - theta
    local = math.pi * math.sqrt(curvature) / (math.sqrt(2.0) * math.sqrt(gap))
    half = math.sqrt(2.0 * gap / curvature)
    m1, m2 = info.m_r - half, info.m_r + half
    return RainbowPeriods(local=local, uniform=2.0 * math.pi / abs(m1 - m2), m1=m1, m2=m2)
