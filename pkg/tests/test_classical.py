"""
Tests for the classical layer: turning points, deflection and orbiting.
"""

import math

import numpy as np
import pytest

from scatter2d.classical import (
    classical_dcs_2d,
    classical_dcs_3d_compare,
    classical_total_2d,
    classical_total_3d,
    deflection,
    deflection_curve,
    detect_orbiting,
    find_orbit,
    kinetic_slope,
    kinetic_term,
    trajectory_deflection,
    turning_point,
)
from scatter2d.errors import (
    DomainError,
    NoClassicalBranch,
    NoTurningPoint,
    OrbitingDegenerate,
)
from scatter2d.potential import AppendixBParams, make_appendix_b, make_gaussian

# U = -2 exp(-r^2) orbits at k^2 = 2 (r0^2 - 1) exp(-r0^2) with r0 = 1.6.
ORBIT_R0 = 1.6
ORBIT_K = math.sqrt(2.0 * (ORBIT_R0**2 - 1.0) * math.exp(-(ORBIT_R0**2)))


@pytest.fixture
def free():
    return make_gaussian(0.0, 1.0)


@pytest.fixture
def barrier():
    return make_gaussian(0.5, 1.0)


@pytest.fixture
def well():
    return make_gaussian(-0.5, 1.0)


@pytest.fixture
def reflecting_curve(barrier):
    """Below the barrier top Theta falls monotonically from pi."""
    return deflection_curve(barrier, 0.5, np.linspace(1e-3, 5.0, 150))


@pytest.fixture
def orbiting():
    return make_gaussian(-2.0, 1.0)


def test_free_turning_point_is_b(free):
    """Without a potential r0 = b."""
    assert turning_point(free, 1.0, 2.0) == pytest.approx(2.0, rel=1e-11)


@pytest.mark.parametrize("b", [0.5, 1.0, 5.0])
def test_free_deflection_vanishes(free, b):
    """U = 0 gives Theta = 0."""
    assert abs(deflection(free, 1.0, b)) < 1e-10


def test_turning_point_is_a_root(well):
    """F(r0) = 0 at the returned turning point."""
    k, b = 3.0, 0.7
    r0 = turning_point(well, k, b)
    assert abs(kinetic_term(well, k, b, r0)) < 1e-9 * k * k


def test_head_on_collisions(barrier, well):
    """b = 0 bounces back off a high barrier and passes through a well."""
    assert deflection(barrier, 0.5, 0.0) == pytest.approx(math.pi)
    assert deflection(well, 2.0, 0.0) == 0.0
    with pytest.raises(NoTurningPoint):
        turning_point(well, 2.0, 0.0)


def test_signs(barrier, well):
    """Repulsion deflects positively, attraction negatively."""
    assert deflection(barrier, 3.0, 0.5) > 0.0
    assert deflection(well, 3.0, 0.5) < 0.0


def test_bad_arguments(well):
    """Negative b and nonpositive k are domain errors."""
    with pytest.raises(DomainError):
        deflection(well, 1.0, -0.1)
    with pytest.raises(DomainError):
        deflection(well, 0.0, 1.0)


@pytest.mark.parametrize("seed", range(10))
def test_quadrature_matches_trajectory(seed):
    """The deflection integral agrees with Hamilton's equations on random smooth cases."""
    rng = np.random.default_rng(seed)
    U0 = float(rng.uniform(-0.5, 0.5))
    a = float(rng.uniform(0.7, 1.5))
    k = float(rng.uniform(2.0, 5.0))
    b = float(rng.uniform(0.3, 2.0))
    pot = make_gaussian(U0, a)
    assert deflection(pot, k, b) == pytest.approx(trajectory_deflection(pot, k, b), abs=1e-5)


def test_coulomb_tail_deflection():
    """Beyond the core the appendix_b potential deflects like a pure 1/r."""
    pot = make_appendix_b(AppendixBParams(A=1.0, R_c=1.0))
    k, b = 2.0, 5.0
    alpha = 1.0 / (k * k)
    exact = 2.0 * math.asin(alpha / math.sqrt(4.0 * b * b + alpha * alpha))
    assert deflection(pot, k, b) == pytest.approx(exact, rel=1e-8)


def test_deflection_curve_records_gaps(well):
    """Curves keep the grid, and r0 is NaN for the pass-through at b = 0."""
    curve = deflection_curve(well, 3.0, np.linspace(0.0, 3.0, 13))
    assert curve.bs.size == 13
    assert curve.thetas_defl[0] == 0.0
    assert math.isnan(curve.turning_points[0])
    assert np.all(np.isfinite(curve.thetas_defl))
    assert not curve.failures


def test_deflection_curve_rejects_unordered_grid(well):
    """The b grid must be strictly increasing."""
    with pytest.raises(DomainError):
        deflection_curve(well, 3.0, [1.0, 0.5])


def test_repulsive_single_branch(reflecting_curve):
    """A monotone repulsive curve has one branch, with dsigma = |db/dTheta|."""
    result = classical_dcs_2d(reflecting_curve, 0.3)
    assert len(result.branches) == 1
    branch = result.branches[0]
    assert abs(branch.theta_defl) == pytest.approx(0.3, abs=1e-9)
    assert result.value == pytest.approx(1.0 / abs(branch.dtheta_db))


def test_dark_side(free, barrier):
    """Beyond max |Theta| the cross section is zero, or raises in strict mode."""
    curve = deflection_curve(barrier, 3.0, np.linspace(1e-3, 4.0, 60))
    dark = classical_dcs_2d(curve, 3.0)
    assert dark.dark_side and dark.value == 0.0
    with pytest.raises(NoClassicalBranch):
        classical_dcs_2d(curve, 3.0, strict=True)
    free_curve = deflection_curve(free, 1.0, np.linspace(0.1, 3.0, 10))
    with pytest.raises(NoClassicalBranch):
        classical_dcs_2d(free_curve, 0.5, strict=True)


def test_rainbow_side_has_two_branches(well):
    """Below the rainbow angle an attractive well has two branches."""
    curve = deflection_curve(well, 3.0, np.linspace(1e-3, 4.0, 160))
    theta = 0.5 * float(np.max(np.abs(curve.thetas_defl)))
    assert len(classical_dcs_2d(curve, theta).branches) == 2


def test_totals():
    """2D total is 2 b_max; 3D total is pi b_max^2."""
    assert classical_total_2d(None, 2.5) == 5.0
    assert classical_total_3d(None, 2.0) == pytest.approx(4.0 * math.pi)
    assert classical_total_2d(None, 0.0) == 0.0
    with pytest.raises(DomainError):
        classical_total_2d(None, -1.0)


def test_three_dimensional_comparison(reflecting_curve):
    """Per-angle 3D is 2 pi b times the 2D cross section for one branch."""
    curve = reflecting_curve
    two_d = classical_dcs_2d(curve, 0.4)
    three_d = classical_dcs_3d_compare(curve, 0.4)
    b = two_d.branches[0].b
    assert three_d.per_angle == pytest.approx(2.0 * math.pi * b * two_d.value, rel=1e-6)
    assert three_d.per_steradian == pytest.approx(
        three_d.per_angle / (2.0 * math.pi * math.sin(0.4)), rel=1e-12
    )
    assert not three_d.glory_divergent


def test_orbit_location(orbiting):
    """The circular orbit is a double root of F."""
    r0, b0 = find_orbit(orbiting, ORBIT_K)
    assert r0 == pytest.approx(ORBIT_R0, rel=1e-9)
    assert abs(kinetic_term(orbiting, ORBIT_K, b0, r0)) < 1e-8
    assert abs(kinetic_slope(orbiting, ORBIT_K, b0, r0)) < 1e-8


def test_orbiting_degenerate_at_b0(orbiting):
    """Asking for the turning point exactly at b0 is refused."""
    _, b0 = find_orbit(orbiting, ORBIT_K)
    with pytest.raises(OrbitingDegenerate):
        turning_point(orbiting, ORBIT_K, b0)


def test_orbiting_log_coefficients(orbiting):
    """Below b0 the logarithmic coefficient is twice the one above."""
    info = detect_orbiting(orbiting, ORBIT_K)
    assert info.exists
    assert info.energy == pytest.approx(ORBIT_K**2)
    assert info.coefficient_ratio == pytest.approx(2.0, rel=0.05)


def test_no_orbiting_for_barrier(barrier):
    """Repulsive potentials never orbit."""
    assert not detect_orbiting(barrier, 1.0).exists


def test_no_glory_while_orbiting(orbiting):
    """Near b0 |Theta| crosses pi at b > 0, which is no glory in 2D."""
    _, b0 = find_orbit(orbiting, ORBIT_K)
    curve = deflection_curve(orbiting, ORBIT_K, b0 * np.geomspace(1.0 + 1e-4, 2.0, 60))
    result = classical_dcs_2d(curve, math.pi)
    assert result.branches
    assert all(br.b > 0.0 for br in result.branches)
    assert math.isfinite(result.value)


def test_three_dimensional_glory_while_orbiting(orbiting):
    """The same backward branch makes the 3D per-steradian form diverge at pi."""
    _, b0 = find_orbit(orbiting, ORBIT_K)
    curve = deflection_curve(orbiting, ORBIT_K, b0 * np.geomspace(1.0 + 1e-4, 2.0, 60))
    three_d = classical_dcs_3d_compare(curve, math.pi)
    assert three_d.glory_divergent
    assert math.isinf(three_d.per_steradian)
    assert math.isfinite(three_d.per_angle)
