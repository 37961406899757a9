"""
Exact partial-wave layer.

The reduced radial function R(r) = sqrt(r) * u(r) of channel m obeys

    R'' + F(r) R = 0,    F(r) = k**2 - U(r) - (m**2 - 1/4) / r**2

It is integrated outward with Numerov's method. The regular solution is
matched at two radii to c1*sqrt(kr)*J_m(kr) + c2*sqrt(kr)*Y_m(kr). This gives
tan(delta_m) = -c2/c1, so R ~ cos(kr - m*pi/2 - pi/4 + delta_m) far out.

The same mesh and matching are applied to the free equation. Its phase is
subtracted, which removes the Numerov dispersion error accumulated in the
potential-free region.
"""

import math
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from scatter2d import specfun
from scatter2d.errors import ConvergenceError, DomainError, MatchingError
from scatter2d.logging_config import get_logger
from scatter2d.parallel import parallel_map
from scatter2d.potential import RadialPotential

logger = get_logger(__name__)

#: Default mesh: this many points per asymptotic wavelength.
POINTS_PER_WAVELENGTH = 400
#: Coarsest mesh allowed.
MIN_POINTS_PER_WAVELENGTH = 20
#: Extra partial waves above k*r_range.
M_MAX_MARGIN = 15
#: Required margin of k*r_match over m_max.
MATCH_MARGIN = 10
#: Progress is logged this many times per phase-shift table.
PROGRESS_STEPS = 10
_RESCALE = 1e150


class PhaseMethod(str, Enum):
    """Where a phase-shift table came from."""

    QUANTUM = "quantum"
    WKB = "wkb"
    EIKONAL = "eikonal"


class DistributionMethod(str, Enum):
    """Which approximation produced an angular distribution."""

    QUANTUM = "quantum"
    CLASSICAL = "classical"
    SPA_INTERFERENCE = "spa_interference"
    AIRY = "airy"


@dataclass(frozen=True)
class ScatteringSetup:
    """Numerical parameters of the partial-wave calculation.

    Attributes:
        k (float): Wavenumber, E = k**2.
        m_max (int): Highest partial wave.
        r_match (float): Inner matching radius, beyond the potential range.
        grid_step (float): Numerov mesh spacing.
    """

    k: float
    m_max: int
    r_match: float
    grid_step: float

    def __post_init__(self) -> None:
        if not self.k > 0.0:
            raise DomainError(f"k must be positive, got {self.k}")
        if self.m_max < 0:
            raise DomainError(f"m_max must be nonnegative, got {self.m_max}")
        if not self.r_match > 0.0 or not self.grid_step > 0.0:
            raise DomainError("r_match and grid_step must be positive")
        if self.k * self.r_match < self.m_max + MATCH_MARGIN:
            raise DomainError(
                f"k*r_match = {self.k * self.r_match:.4g} must be >= m_max + "
                f"{MATCH_MARGIN} = {self.m_max + MATCH_MARGIN}"
            )
        wavelength = 2.0 * math.pi / self.k
        if self.grid_step > wavelength / MIN_POINTS_PER_WAVELENGTH * (1.0 + 1e-12):
            raise DomainError(
                f"grid_step = {self.grid_step:.4g} exceeds wavelength/"
                f"{MIN_POINTS_PER_WAVELENGTH} = {wavelength / MIN_POINTS_PER_WAVELENGTH:.4g}"
            )

    @property
    def wavelength(self) -> float:
        return 2.0 * math.pi / self.k


@dataclass(frozen=True)
class PhaseShiftTable:
    """Phase shifts delta_m(k) for m = 0..m_max.

    Quantum tables hold principal values in (-pi/2, pi/2]. WKB tables hold
    absolute (unwrapped) phases.

    Attributes:
        k (float): Wavenumber.
        deltas (tuple[float, ...]): delta_m indexed by m.
        method (PhaseMethod): Provenance of the values.
    """

    k: float
    deltas: Tuple[float, ...]
    method: PhaseMethod = PhaseMethod.QUANTUM

    def __post_init__(self) -> None:
        object.__setattr__(self, "deltas", tuple(float(d) for d in self.deltas))
        if not self.k > 0.0:
            raise DomainError(f"k must be positive, got {self.k}")
        if not all(math.isfinite(d) for d in self.deltas):
            raise DomainError("Phase-shift table contains non-finite values")

    @property
    def m_max(self) -> int:
        return len(self.deltas) - 1

    def as_array(self) -> NDArray[np.float64]:
        return np.asarray(self.deltas, dtype=float)


@dataclass(frozen=True)
class AngularDistribution:
    """dsigma/dtheta sampled on an angle grid.

    NaN entries mark angles where the method does not apply (dark side,
    caustic window). All other values are nonnegative.
    """

    thetas: NDArray[np.float64] = field(repr=False)
    values: NDArray[np.float64] = field(repr=False)
    method: DistributionMethod

    def __post_init__(self) -> None:
        thetas = np.asarray(self.thetas, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if thetas.shape != values.shape or thetas.ndim != 1:
            raise DomainError("thetas and values must be 1-D arrays of equal length")
        if np.any(np.diff(thetas) <= 0.0):
            raise DomainError("Angle grid must be strictly increasing")
        if thetas.size and (thetas[0] <= 0.0 or thetas[-1] > math.pi + 1e-12):
            raise DomainError("Angles must lie in (0, pi]")
        if np.any(values[np.isfinite(values)] < 0.0):
            raise DomainError("Differential cross section must be nonnegative")
        object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "values", values)


def default_setup(
    pot: RadialPotential,
    k: float,
    m_max: Optional[int] = None,
    r_match: Optional[float] = None,
    grid_step: Optional[float] = None,
) -> ScatteringSetup:
    """Fill in the documented defaults for a potential and wavenumber.

    - m_max = ceil(k * r_range) + 15
    - r_match = max(r_range, (m_max + 10)/k)
    - grid_step = wavelength / 400
    """
    if not k > 0.0:
        raise DomainError(f"k must be positive, got {k}")
    reach = pot.outer_radius
    if m_max is None:
        m_max = int(math.ceil(k * reach)) + M_MAX_MARGIN
    if r_match is None:
        r_match = max(reach, (m_max + MATCH_MARGIN) / k)
    if grid_step is None:
        grid_step = 2.0 * math.pi / k / POINTS_PER_WAVELENGTH
    return ScatteringSetup(k=k, m_max=m_max, r_match=r_match, grid_step=grid_step)


def _mesh(setup: ScatteringSetup) -> Tuple[int, int]:
    h = setup.grid_step
    n1 = int(round(setup.r_match / h))
    n2 = n1 + max(1, int(round(setup.wavelength / 4.0 / h)))
    return n1, n2


def _start_index(m: int) -> int:
    # Keeps 1 + h**2 F/12 away from zero where the centrifugal term dominates.
    return max(1, int(math.ceil(m / 2.0)))


def _numerov(
    w: Sequence[float], n0: int, y0: float, y1: float
) -> List[float]:
    """Numerov recurrence on w_n = 1 + h**2 F_n / 12, from indices n0 and n0+1."""
    n_last = len(w) - 1
    y = [0.0] * (n_last + 1)
    y[n0] = y0
    y[n0 + 1] = y1
    ym, yn = y0, y1
    for n in range(n0 + 1, n_last):
        yp = ((12.0 - 10.0 * w[n]) * yn - w[n - 1] * ym) / w[n + 1]
        if abs(yp) > _RESCALE:
            scale = 1.0 / _RESCALE
            yp *= scale
            yn *= scale
            for i in range(n0, n + 1):
                y[i] *= scale
        y[n + 1] = yp
        ym, yn = yn, yp
    return y


def _integrate(
    pot: Optional[RadialPotential], setup: ScatteringSetup, m: int, n_last: int
) -> Tuple[NDArray[np.float64], List[float]]:
    h = setup.grid_step
    k2 = setup.k**2
    r = h * np.arange(n_last + 1, dtype=float)
    u = np.zeros_like(r) if pot is None else np.asarray(pot(r), dtype=float)
    with np.errstate(divide="ignore"):
        F = k2 - u - (m * m - 0.25) / r**2
    F[0] = 0.0
    w = 1.0 + h * h * F / 12.0
    n0 = _start_index(m)
    q2 = k2 - u[n0]
    # Leading two terms of the regular solution r**(m+1/2) J_m(qr)/(qr)**m.
    def start(n: int) -> float:
        rn = r[n]
        ratio = (rn / r[n0]) ** (m + 0.5)
        return ratio * (1.0 - q2 * rn * rn / (4.0 * (m + 1)))

    y = _numerov(w.tolist(), n0, start(n0), start(n0 + 1))
    if not all(math.isfinite(v) for v in (y[-1], y[-2])):
        raise ConvergenceError(
            f"Numerov integration diverged for m={m} (grid_step={h:.3g})"
        )
    return r, y


def _match(setup: ScatteringSetup, m: int, r1: float, r2: float, y1: float, y2: float) -> float:
    k = setup.k
    s1, s2 = math.sqrt(k * r1), math.sqrt(k * r2)
    j1, j2 = s1 * specfun.bessel_j(m, k * r1), s2 * specfun.bessel_j(m, k * r2)
    n1, n2 = s1 * specfun.bessel_y(m, k * r1), s2 * specfun.bessel_y(m, k * r2)
    det = j1 * n2 - j2 * n1
    scale = abs(j1 * n2) + abs(j2 * n1)
    if abs(det) < 1e-10 * scale:
        raise MatchingError(
            f"Matching determinant {det:.3e} near zero for m={m} at r={r1:.6g}, {r2:.6g}"
        )
    c1 = (y1 * n2 - y2 * n1) / det
    c2 = (j1 * y2 - j2 * y1) / det
    return math.atan2(-c2, c1)


def principal_value(delta: float) -> float:
    """Reduce a phase to (-pi/2, pi/2]."""
    return math.pi / 2.0 - (math.pi / 2.0 - delta) % math.pi


def radial_phase_shift(pot: RadialPotential, setup: ScatteringSetup, m: int) -> float:
    """Phase shift delta_m from the outward Numerov solution.

    Args:
        pot: Potential with r_range <= setup.r_match.
        setup: Mesh and matching parameters.
        m: Partial wave, 0 <= m <= setup.m_max.

    Returns:
        float: delta_m in (-pi/2, pi/2].

    Raises:
        DomainError: Bad m or a matching radius inside the potential range.
        MatchingError: Near-singular matching determinant.
        ConvergenceError: The recurrence produced non-finite values.
    """
    if int(m) != m or not 0 <= m <= setup.m_max:
        raise DomainError(f"m must be an integer in [0, {setup.m_max}], got {m}")
    m = int(m)
    if setup.r_match < pot.outer_radius * (1.0 - 1e-12):
        raise DomainError(
            f"r_match = {setup.r_match:.6g} lies inside the potential range "
            f"{pot.outer_radius:.6g}"
        )
    n1, n2 = _mesh(setup)
    r, y = _integrate(pot, setup, m, n2)
    _, y_free = _integrate(None, setup, m, n2)
    raw = _match(setup, m, r[n1], r[n2], y[n1], y[n2])
    raw_free = _match(setup, m, r[n1], r[n2], y_free[n1], y_free[n2])
    delta = principal_value(raw - raw_free)
    logger.debug(
        "m=%d delta=%.12e (free residual %.3e)", m, delta, principal_value(raw_free)
    )
    return delta


def regular_solution(
    pot: RadialPotential, setup: ScatteringSetup, m: int
) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """The Numerov regular solution out to the outer matching point.

    Returns:
        tuple: (r, R) from the first integrated mesh point on, with R scaled
        to unit peak magnitude.
    """
    m = int(m)
    _, n2 = _mesh(setup)
    r, y = _integrate(pot, setup, m, n2)
    n0 = _start_index(m)
    values = np.asarray(y[n0:], dtype=float)
    return r[n0:], values / np.max(np.abs(values))


def phase_shift_table(pot: RadialPotential, setup: ScatteringSetup) -> PhaseShiftTable:
    """Quantum phase shifts for m = 0..m_max, computed as a parallel map over m.

    Progress is logged at INFO every tenth of the table.
    """
    total = setup.m_max + 1
    stride = max(1, total // PROGRESS_STEPS)
    lock = threading.Lock()
    done = [0]
    logger.info(
        "Integrating %d partial waves for %s on %d mesh points each",
        total,
        pot.label,
        _mesh(setup)[1],
    )

    def run(m: int) -> float:
        delta = radial_phase_shift(pot, setup, m)
        with lock:
            done[0] += 1
            count = done[0]
        if count % stride == 0 or count == total:
            logger.info("Phase shifts: %d/%d partial waves done", count, total)
        return delta

    deltas = parallel_map(run, range(total))
    logger.info(
        "Quantum phase shifts for %s at k=%g: m_max=%d, |delta_0|=%.4g",
        pot.label,
        setup.k,
        setup.m_max,
        abs(deltas[0]),
    )
    return PhaseShiftTable(k=setup.k, deltas=tuple(deltas), method=PhaseMethod.QUANTUM)


def _weights(m_max: int) -> NDArray[np.float64]:
    eps = np.full(m_max + 1, 2.0)
    eps[0] = 1.0
    return eps


def amplitude(table: PhaseShiftTable, theta: ArrayLike) -> Union[complex, NDArray[np.complex128]]:
    """Scattering amplitude f(k, theta) = sqrt(2/pi) sum eps_m cos(m theta) e^{i d} sin d.

    Accepts a scalar angle or an array of angles.
    """
    deltas = table.as_array()
    m = np.arange(deltas.size)
    coeffs = _weights(table.m_max) * np.exp(1j * deltas) * np.sin(deltas)
    angles = np.asarray(theta, dtype=float)
    f = math.sqrt(2.0 / math.pi) * (np.cos(np.multiply.outer(angles, m)) @ coeffs)
    return complex(f) if f.ndim == 0 else f


def differential_cross_section(
    table: PhaseShiftTable, thetas: ArrayLike
) -> AngularDistribution:
    """|f(k, theta)|**2 / k on an angle grid in (0, pi]."""
    thetas = np.asarray(thetas, dtype=float)
    values = np.abs(amplitude(table, thetas)) ** 2 / table.k
    return AngularDistribution(thetas=thetas, values=values, method=DistributionMethod.QUANTUM)


def total_cross_section(table: PhaseShiftTable) -> float:
    """sigma = (4/k) sum eps_m sin**2 delta_m (length units)."""
    deltas = table.as_array()
    return float(4.0 / table.k * np.sum(_weights(table.m_max) * np.sin(deltas) ** 2))


def optical_theorem_cross_section(table: PhaseShiftTable) -> float:
    """sigma from the forward amplitude, (2 sqrt(2 pi) / k) Im f(0)."""
    forward = amplitude(table, 0.0)
    return 2.0 * math.sqrt(2.0 * math.pi) / table.k * complex(forward).imag
