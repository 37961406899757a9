"""
Central potentials U(r).

Units follow hbar**2/(2 mu) = 1 throughout the package. E = k**2 and U equals V
numerically, both in inverse length squared.

Catalog:
- ``make_gaussian``: U0 * exp(-r**2/a**2)
- ``make_appendix_b``: soft-core 1/r model with a parabolic interior
- ``make_tabulated``: monotone cubic through user samples (``load_tabulated_csv``)
"""

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.interpolate import PchipInterpolator

from scatter2d.errors import DomainError
from scatter2d.logging_config import get_logger

logger = get_logger(__name__)

DEFAULT_RANGE_EPSILON = 1e-10
#: Screening radius of slow-decay potentials, in units of their core radius.
SLOW_DECAY_RMAX_FACTOR = 1e3

Evaluator = Callable[[NDArray[np.float64]], NDArray[np.float64]]
FloatOrArray = Union[float, NDArray[np.float64]]


@dataclass(frozen=True)
class AppendixBParams:
    """Parameters of the soft-core model.

    Attributes:
        A (float): Strength times length; positive is repulsive.
        R_c (float): Matching radius between the parabolic core and the 1/r tail.
    """

    A: float
    R_c: float


@dataclass(frozen=True)
class RadialPotential:
    """An immutable central potential with its effective range.

    Attributes:
        evaluator: Vectorised r -> U(r).
        derivative: Vectorised r -> dU/dr.
        r_range: |U(r)| < range_epsilon for every r >= r_range.
        range_epsilon: Threshold behind ``r_range``.
        label: Human-readable description.
        slow_decay: True when ``r_range`` is too large to integrate to and
            integrators stop at ``r_max`` instead.
        r_max: Screening radius used for slow-decay potentials.
        coulomb_tail: Coefficient A of an exact A/r tail beyond ``tail_start``.
        tail_start: Radius where the A/r tail begins.
        breakpoints: Radii where U or its derivatives are not smooth.
    """

    evaluator: Evaluator = field(repr=False)
    derivative: Evaluator = field(repr=False)
    r_range: float
    range_epsilon: float = DEFAULT_RANGE_EPSILON
    label: str = ""
    slow_decay: bool = False
    r_max: Optional[float] = None
    coulomb_tail: Optional[float] = None
    tail_start: Optional[float] = None
    breakpoints: Tuple[float, ...] = ()

    def __call__(self, r: ArrayLike) -> FloatOrArray:
        values = self.evaluator(np.asarray(r, dtype=float))
        return float(values) if np.ndim(values) == 0 else values

    def gradient(self, r: ArrayLike) -> FloatOrArray:
        """dU/dr at r."""
        values = self.derivative(np.asarray(r, dtype=float))
        return float(values) if np.ndim(values) == 0 else values

    @property
    def outer_radius(self) -> float:
        """Radius where numerical integrations stop."""
        if self.slow_decay and self.r_max is not None:
            return self.r_max
        return self.r_range


def _check_range(pot: RadialPotential) -> RadialPotential:
    probe = pot.r_range * np.geomspace(1.0, 1e3, 16)
    worst = float(np.max(np.abs(pot.evaluator(probe))))
    if worst >= pot.range_epsilon:
        raise DomainError(
            f"{pot.label}: |U| = {worst:.3e} beyond r_range = {pot.r_range:.6g}"
        )
    return pot


def make_gaussian(
    U0: float, a: float, range_epsilon: float = DEFAULT_RANGE_EPSILON
) -> RadialPotential:
    """Gaussian potential U(r) = U0 * exp(-r**2 / a**2).

    Args:
        U0: Depth (negative) or height (positive).
        a: Width, must be positive.
        range_epsilon: Threshold defining r_range.

    Returns:
        RadialPotential: With r_range = a*sqrt(ln(|U0|/range_epsilon)).

    Raises:
        DomainError: If a <= 0.

    Example:
        >>> make_gaussian(0.5, 2.0)(2.0)  # 0.5/e
        0.18393972058572117
    """
    if not a > 0.0:
        raise DomainError(f"Gaussian width must be positive, got a={a}")
    if not range_epsilon > 0.0:
        raise DomainError(f"range_epsilon must be positive, got {range_epsilon}")
    U0 = float(U0)
    a = float(a)
    ratio = abs(U0) / range_epsilon
    r_range = a * math.sqrt(math.log(ratio)) * (1.0 + 1e-9) if ratio > 1.0 else a

    def evaluator(r: NDArray[np.float64]) -> NDArray[np.float64]:
        return U0 * np.exp(-((r / a) ** 2))

    def derivative(r: NDArray[np.float64]) -> NDArray[np.float64]:
        return -2.0 * r / (a * a) * U0 * np.exp(-((r / a) ** 2))

    pot = RadialPotential(
        evaluator=evaluator,
        derivative=derivative,
        r_range=r_range,
        range_epsilon=range_epsilon,
        label=f"gaussian(U0={U0:g}, a={a:g})",
    )
    return _check_range(pot)


def make_appendix_b(
    params: AppendixBParams, range_epsilon: float = DEFAULT_RANGE_EPSILON
) -> RadialPotential:
    """Soft-core model: A/r outside R_c, A/(2R_c)*(3 - (r/R_c)**2) inside.

    The two branches and their first derivatives agree at R_c. The A/r tail is
    declared slow-decaying: integrators stop at r_max = 1e3*R_c. The deflection
    integral adds the exact 1/r tail beyond r_max. Phase integrals treat U as
    screened there, so their neglected tail is of order
    (A/2k)*ln(r/r_max) for r beyond r_max.

    Raises:
        DomainError: If R_c <= 0.
    """
    A = float(params.A)
    R_c = float(params.R_c)
    if not R_c > 0.0:
        raise DomainError(f"R_c must be positive, got {R_c}")
    if not range_epsilon > 0.0:
        raise DomainError(f"range_epsilon must be positive, got {range_epsilon}")

    def evaluator(r: NDArray[np.float64]) -> NDArray[np.float64]:
        inner = A / (2.0 * R_c) * (3.0 - (r / R_c) ** 2)
        outer = A / np.where(r > 0.0, r, 1.0)
        return np.where(r < R_c, inner, outer)

    def derivative(r: NDArray[np.float64]) -> NDArray[np.float64]:
        inner = -A * r / R_c**3
        outer = -A / np.where(r > 0.0, r, 1.0) ** 2
        return np.where(r < R_c, inner, outer)

    r_range = max(abs(A) / range_epsilon * (1.0 + 1e-9), R_c)
    pot = RadialPotential(
        evaluator=evaluator,
        derivative=derivative,
        r_range=r_range,
        range_epsilon=range_epsilon,
        label=f"appendix_b(A={A:g}, R_c={R_c:g})",
        slow_decay=A != 0.0,
        r_max=SLOW_DECAY_RMAX_FACTOR * R_c,
        coulomb_tail=A,
        tail_start=R_c,
        breakpoints=(R_c,),
    )
    return _check_range(pot)


def make_tabulated(
    samples: Iterable[Sequence[float]],
    label: str = "tabulated",
    range_epsilon: float = DEFAULT_RANGE_EPSILON,
) -> RadialPotential:
    """Monotone cubic (PCHIP) interpolant through (r, U) samples.

    Below the first sample U is held at the first value. Beyond the last
    sample U is zero.

    Args:
        samples: (r, U) pairs with strictly increasing, positive r.
        label: Description stored on the potential.
        range_epsilon: Threshold behind r_range.

    Raises:
        DomainError: Fewer than two samples, NaN values or a non-monotone grid.
    """
    table = np.asarray([tuple(pair) for pair in samples], dtype=float)
    if table.ndim != 2 or table.shape[0] < 2 or table.shape[1] != 2:
        raise DomainError("A tabulated potential needs at least two (r, U) samples")
    if not np.all(np.isfinite(table)):
        raise DomainError("Tabulated potential contains NaN or infinite values")
    r, u = table[:, 0], table[:, 1]
    if np.any(np.diff(r) <= 0.0):
        raise DomainError("Tabulated r values must be strictly increasing")
    if r[0] < 0.0:
        raise DomainError(f"Tabulated r values must be nonnegative, got {r[0]}")

    spline = PchipInterpolator(r, u, extrapolate=False)
    slope = spline.derivative()
    r_first, r_last = float(r[0]), float(r[-1])
    u_first = float(u[0])

    def evaluator(x: NDArray[np.float64]) -> NDArray[np.float64]:
        inside = np.nan_to_num(spline(np.clip(x, r_first, r_last)))
        out = np.where(x < r_first, u_first, inside)
        return np.where(x > r_last, 0.0, out)

    def derivative(x: NDArray[np.float64]) -> NDArray[np.float64]:
        inside = np.nan_to_num(slope(np.clip(x, r_first, r_last)))
        return np.where((x < r_first) | (x > r_last), 0.0, inside)

    pot = RadialPotential(
        evaluator=evaluator,
        derivative=derivative,
        r_range=float(np.nextafter(r_last, np.inf)),
        range_epsilon=range_epsilon,
        label=label,
        breakpoints=(r_last,),
    )
    logger.debug("Tabulated potential %s: %d samples on [%g, %g]", label, len(r), r_first, r_last)
    return _check_range(pot)


def load_tabulated_csv(
    path: Union[str, Path], range_epsilon: float = DEFAULT_RANGE_EPSILON
) -> RadialPotential:
    """Read a two-column CSV (r, U), with an optional header row."""
    path = Path(path)
    rows = []
    with path.open(newline="") as fh:
        for i, row in enumerate(csv.reader(fh)):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 2:
                raise DomainError(f"{path}:{i + 1}: expected two columns, got {len(row)}")
            try:
                rows.append((float(row[0]), float(row[1])))
            except ValueError:
                if i == 0 and not rows:
                    continue  # header
                raise DomainError(f"{path}:{i + 1}: non-numeric row {row!r}")
    return make_tabulated(rows, label=f"tabulated({path.name})", range_epsilon=range_epsilon)
