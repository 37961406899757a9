"""
Tests for the exact partial-wave layer.
"""

import logging
import math

import numpy as np
import pytest
from scipy import special
from scipy.integrate import trapezoid

from scatter2d.errors import DomainError
from scatter2d.potential import make_gaussian
from scatter2d.quantum import (
    AngularDistribution,
    DistributionMethod,
    PhaseShiftTable,
    ScatteringSetup,
    amplitude,
    default_setup,
    differential_cross_section,
    optical_theorem_cross_section,
    phase_shift_table,
    principal_value,
    radial_phase_shift,
    regular_solution,
    total_cross_section,
)


@pytest.fixture
def free():
    """U = 0 everywhere."""
    return make_gaussian(0.0, 1.0)


@pytest.fixture
def well():
    """The attractive Gaussian used throughout the tests."""
    return make_gaussian(-0.5, 1.0)


def test_free_particle_has_no_phase_shift(free):
    """U = 0 gives delta_m = 0 for m up to 20."""
    setup = default_setup(free, 1.0, m_max=20)
    table = phase_shift_table(free, setup)
    assert np.max(np.abs(table.as_array())) < 1e-8


def test_high_partial_wave_is_unshifted():
    """A partial wave far outside the potential does not feel it."""
    pot = make_gaussian(-0.2, 1.0)
    setup = default_setup(pot, 3.0, m_max=40)
    assert abs(radial_phase_shift(pot, setup, 40)) < 1e-6


@pytest.mark.parametrize("m", [25, 28, 30])
def test_partial_waves_beyond_the_range_close(well, m):
    """Above k r_range + 10 the phase shifts have died out."""
    k = 3.0
    assert m > k * well.r_range + 10.0
    assert abs(radial_phase_shift(well, default_setup(well, k), m)) < 1e-6


@pytest.mark.parametrize("m", [0, 1])
def test_free_solution_has_the_bessel_asymptote(free, m):
    """At kr >= 50 the free solution follows cos(kr - m pi/2 - pi/4) up to scale."""
    k = 5.0
    setup = ScatteringSetup(k=k, m_max=2, r_match=12.0, grid_step=2.0 * math.pi / k / 400.0)
    r, R = regular_solution(free, setup, m)
    x = k * r[k * r >= 50.0]
    values = R[k * r >= 50.0]
    assert x.size > 100
    # Leading phase correction of the Hankel expansion.
    omega = x - m * math.pi / 2.0 - math.pi / 4.0 + (4 * m * m - 1) / (8.0 * x)
    basis = np.column_stack([np.cos(omega), np.sin(omega)])
    (c, s), *_ = np.linalg.lstsq(basis, values, rcond=None)
    assert abs(math.atan(s / c)) < 1e-3
    assert np.max(np.abs(values - basis @ np.array([c, s]))) < 1e-4 * math.hypot(c, s)


@pytest.mark.parametrize("m", [0, 1, 3])
def test_weak_potential_matches_born(m):
    """tan(delta) ~ -(pi/2) int U J_m(kr)^2 r dr for a weak Gaussian."""
    U0, a, k = 1e-3, 1.0, 2.0
    pot = make_gaussian(U0, a)
    setup = default_setup(pot, k)
    x = k * k * a * a / 2.0
    born = -(math.pi / 2.0) * U0 * (a * a / 2.0) * special.ive(m, x)
    assert radial_phase_shift(pot, setup, m) == pytest.approx(born, rel=0.02)


def test_attraction_and_repulsion_signs():
    """Attractive wells shift phases up, barriers down."""
    k = 2.0
    attractive = make_gaussian(-0.3, 1.0)
    repulsive = make_gaussian(0.3, 1.0)
    assert radial_phase_shift(attractive, default_setup(attractive, k), 0) > 0.0
    assert radial_phase_shift(repulsive, default_setup(repulsive, k), 0) < 0.0


def test_grid_refinement_is_stable(well):
    """Halving the mesh step moves delta_m by less than 1e-7."""
    k = 3.0
    coarse = default_setup(well, k)
    fine = ScatteringSetup(
        k=k, m_max=coarse.m_max, r_match=coarse.r_match, grid_step=coarse.grid_step / 2.0
    )
    for m in (0, 2, 5):
        assert radial_phase_shift(well, coarse, m) == pytest.approx(
            radial_phase_shift(well, fine, m), abs=1e-7
        )


def test_ten_times_finer_grid_agrees():
    """delta_0 for a shallow well matches a run on a ten times finer mesh."""
    pot = make_gaussian(-0.2, 1.0)
    k = 3.0
    coarse = default_setup(pot, k)
    fine = ScatteringSetup(
        k=k, m_max=coarse.m_max, r_match=coarse.r_match, grid_step=coarse.grid_step / 10.0
    )
    assert radial_phase_shift(pot, coarse, 0) == pytest.approx(
        radial_phase_shift(pot, fine, 0), abs=1e-6
    )


def test_phase_shifts_are_principal_values(well):
    """Every entry lies in (-pi/2, pi/2]."""
    table = phase_shift_table(well, default_setup(well, 3.0))
    deltas = table.as_array()
    assert np.all(deltas > -math.pi / 2.0)
    assert np.all(deltas <= math.pi / 2.0)


def test_principal_value_reduction():
    """Multiples of pi are removed and the upper end is closed."""
    assert principal_value(math.pi / 2.0) == pytest.approx(math.pi / 2.0)
    assert principal_value(-math.pi / 2.0) == pytest.approx(math.pi / 2.0)
    assert principal_value(0.3 + 2.0 * math.pi) == pytest.approx(0.3)


def test_setup_rejects_short_matching_radius():
    """k r_match must exceed m_max by the matching margin."""
    with pytest.raises(DomainError):
        ScatteringSetup(k=1.0, m_max=20, r_match=25.0, grid_step=0.01)


def test_setup_rejects_coarse_grid():
    """Fewer than 20 points per wavelength is refused."""
    with pytest.raises(DomainError):
        ScatteringSetup(k=1.0, m_max=5, r_match=20.0, grid_step=2.0 * math.pi / 10.0)


def test_matching_inside_range_is_refused(well):
    """r_match inside the potential range is a domain error."""
    setup = ScatteringSetup(k=20.0, m_max=5, r_match=1.0, grid_step=0.001)
    with pytest.raises(DomainError):
        radial_phase_shift(well, setup, 0)


def test_m_outside_table_is_refused(well):
    """m above m_max is a domain error."""
    setup = default_setup(well, 1.0, m_max=3)
    with pytest.raises(DomainError):
        radial_phase_shift(well, setup, 4)


@pytest.mark.parametrize("seed", range(20))
def test_total_cross_section_normalisation(seed):
    """(4/k) sum eps sin^2 delta equals the integral of |f|^2/k over the circle."""
    rng = np.random.default_rng(seed)
    k = float(rng.uniform(0.5, 5.0))
    table = PhaseShiftTable(k=k, deltas=tuple(rng.uniform(-1.5, 1.5, 12)))
    thetas = np.linspace(0.0, 2.0 * math.pi, 4097)
    integral = trapezoid(np.abs(amplitude(table, thetas)) ** 2 / k, thetas)
    assert total_cross_section(table) == pytest.approx(integral, rel=1e-8)
    assert optical_theorem_cross_section(table) == pytest.approx(
        total_cross_section(table), rel=1e-8
    )


def test_amplitude_scalar_and_array():
    """A scalar angle gives a complex number, an array gives an array."""
    table = PhaseShiftTable(k=1.0, deltas=(0.1, 0.05))
    assert isinstance(amplitude(table, 0.5), complex)
    assert amplitude(table, np.array([0.1, 0.2])).shape == (2,)


def test_differential_cross_section(well):
    """The quantum distribution is nonnegative and tagged."""
    table = phase_shift_table(well, default_setup(well, 2.0))
    dist = differential_cross_section(table, np.linspace(0.1, math.pi, 30))
    assert dist.method is DistributionMethod.QUANTUM
    assert np.all(dist.values >= 0.0)


def test_angular_distribution_validation():
    """Angles outside (0, pi] or negative values are refused."""
    with pytest.raises(DomainError):
        AngularDistribution(np.array([0.0, 1.0]), np.array([1.0, 1.0]), DistributionMethod.QUANTUM)
    with pytest.raises(DomainError):
        AngularDistribution(np.array([0.5, 1.0]), np.array([1.0, -1.0]), DistributionMethod.QUANTUM)
    gaps = AngularDistribution(
        np.array([0.5, 1.0]), np.array([np.nan, 1.0]), DistributionMethod.SPA_INTERFERENCE
    )
    assert np.isnan(gaps.values[0])


def test_phase_table_rejects_nan():
    """Non-finite phases are refused."""
    with pytest.raises(DomainError):
        PhaseShiftTable(k=1.0, deltas=(0.0, math.nan))


def test_regular_solution_is_normalised(well):
    """The regular solution is scaled to unit peak magnitude."""
    r, R = regular_solution(well, default_setup(well, 2.0), 1)
    assert r.shape == R.shape
    assert np.max(np.abs(R)) == pytest.approx(1.0)
    assert r[0] > 0.0


def test_single_resonant_channel():
    """delta_0 = pi/2 alone gives f = i sqrt(2/pi) at every angle and sigma = 4 at k = 1."""
    table = PhaseShiftTable(k=1.0, deltas=(math.pi / 2.0,))
    thetas = np.linspace(0.0, math.pi, 7)
    np.testing.assert_allclose(amplitude(table, thetas), 1j * math.sqrt(2.0 / math.pi), atol=1e-12)
    assert total_cross_section(table) == pytest.approx(4.0)
    assert optical_theorem_cross_section(table) == pytest.approx(4.0)


def test_phase_table_logs_progress(free, caplog):
    """Long tables report their progress at INFO."""
    package_logger = logging.getLogger("scatter2d")
    package_logger.addHandler(caplog.handler)
    caplog.set_level(logging.INFO, logger="scatter2d")
    try:
        phase_shift_table(free, default_setup(free, 1.0, m_max=19))
    finally:
        package_logger.removeHandler(caplog.handler)
    progress = [r.getMessage() for r in caplog.records if "partial waves done" in r.getMessage()]
    assert len(progress) == 10
    assert progress[-1] == "Phase shifts: 20/20 partial waves done"
