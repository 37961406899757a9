"""
Tests for the potential catalog.
"""

import math

import numpy as np
import pytest

from scatter2d.errors import DomainError
from scatter2d.potential import (
    AppendixBParams,
    SLOW_DECAY_RMAX_FACTOR,
    load_tabulated_csv,
    make_appendix_b,
    make_gaussian,
    make_tabulated,
)


def test_gaussian_values_and_range():
    """U0 exp(-r^2/a^2) with |U| below epsilon beyond r_range."""
    pot = make_gaussian(-0.5, 2.0)
    assert pot(0.0) == pytest.approx(-0.5)
    assert pot(2.0) == pytest.approx(-0.5 / math.e)
    assert abs(pot(pot.r_range)) < pot.range_epsilon
    assert pot.r_range == pytest.approx(2.0 * math.sqrt(math.log(0.5 / 1e-10)), rel=1e-8)


def test_gaussian_gradient():
    """The analytic derivative matches a centered difference."""
    pot = make_gaussian(0.7, 1.3)
    r, h = 0.9, 1e-6
    assert pot.gradient(r) == pytest.approx((pot(r + h) - pot(r - h)) / (2 * h), rel=1e-7)


def test_gaussian_is_vectorised():
    """Arrays in, arrays out."""
    pot = make_gaussian(1.0, 1.0)
    values = pot(np.array([0.0, 1.0, 2.0]))
    assert values.shape == (3,)
    assert values[0] == pytest.approx(1.0)


def test_null_gaussian():
    """U0 = 0 is the free particle with r_range = a."""
    pot = make_gaussian(0.0, 1.0)
    assert pot(0.3) == 0.0
    assert pot.r_range == 1.0


def test_gaussian_rejects_bad_width():
    """a <= 0 is a domain error."""
    with pytest.raises(DomainError):
        make_gaussian(1.0, 0.0)


def test_appendix_b_continuity():
    """Both branches and their slopes join at R_c."""
    pot = make_appendix_b(AppendixBParams(A=1.0, R_c=2.0))
    eps = 1e-9
    assert pot(2.0 - eps) == pytest.approx(pot(2.0 + eps), rel=1e-7)
    assert pot.gradient(2.0 - eps) == pytest.approx(pot.gradient(2.0 + eps), rel=1e-7)
    assert pot(0.0) == pytest.approx(3.0 / 4.0)
    assert pot(4.0) == pytest.approx(0.25)


@pytest.mark.parametrize("R_c", [0.5, 1.0, 2.0])
def test_appendix_b_seam(R_c):
    """Just either side of R_c the two branches agree to 1e-5 relative."""
    pot = make_appendix_b(AppendixBParams(A=1.0, R_c=R_c))
    eps = 1e-6 * R_c
    assert pot(R_c - eps) == pytest.approx(pot(R_c + eps), rel=1e-5)


def test_appendix_b_is_slow_decay():
    """The 1/r tail is declared with its screening radius."""
    pot = make_appendix_b(AppendixBParams(A=1.0, R_c=1.0))
    assert pot.slow_decay
    assert pot.r_max == SLOW_DECAY_RMAX_FACTOR
    assert pot.outer_radius == pot.r_max
    assert pot.coulomb_tail == 1.0
    assert pot.breakpoints == (1.0,)


def test_tabulated_interpolates_and_truncates():
    """PCHIP through the samples, constant inside, zero outside."""
    r = np.linspace(0.1, 3.0, 40)
    pot = make_tabulated(zip(r, -np.exp(-r)))
    assert pot(1.0) == pytest.approx(-math.exp(-1.0), rel=1e-3)
    assert pot(0.0) == pytest.approx(-math.exp(-0.1))
    assert pot(3.5) == 0.0
    assert pot.r_range > 3.0


@pytest.mark.parametrize(
    "samples",
    [
        [(1.0, 0.0)],
        [(1.0, 0.0), (0.5, 0.0)],
        [(0.0, 1.0), (1.0, float("nan"))],
        [(-1.0, 0.0), (1.0, 0.0)],
    ],
)
def test_tabulated_rejects_bad_samples(samples):
    """Too few, unordered, NaN or negative samples are refused."""
    with pytest.raises(DomainError):
        make_tabulated(samples)


def test_load_tabulated_csv_with_header(tmp_path):
    """A header row and blank lines are skipped."""
    path = tmp_path / "u.csv"
    path.write_text("r,U\n0.0,1.0\n\n1.0,0.5\n2.0,0.0\n")
    pot = load_tabulated_csv(path)
    assert pot(1.0) == pytest.approx(0.5)
    assert "u.csv" in pot.label


def test_load_tabulated_csv_rejects_garbage(tmp_path):
    """Non-numeric data rows are refused."""
    path = tmp_path / "bad.csv"
    path.write_text("0.0,1.0\nx,y\n")
    with pytest.raises(DomainError):
        load_tabulated_csv(path)


def test_tabulated_gaussian_on_log_grid():
    """A Gaussian sampled on 200 log-spaced points is reproduced to 1e-4."""
    exact = make_gaussian(-0.5, 1.0)
    r = np.geomspace(1e-2, 5.0, 200)
    pot = make_tabulated(zip(r, exact(r)))
    mid = np.sqrt(r[:-1] * r[1:])
    assert np.max(np.abs(pot(mid) - exact(mid))) < 1e-4


@pytest.mark.parametrize("seed", range(10))
def test_r_range_holds_for_random_parameters(seed):
    """|U| stays below range_epsilon from r_range outward."""
    rng = np.random.default_rng(seed)
    U0 = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.05, 3.0))
    gaussian = make_gaussian(U0, float(rng.uniform(0.3, 3.0)))
    soft = make_appendix_b(
        AppendixBParams(A=float(rng.uniform(0.1, 3.0)), R_c=float(rng.uniform(0.5, 2.0)))
    )
    for pot in (gaussian, soft):
        radii = pot.r_range * np.array([1.0, 1.01, 1.5, 3.0])
        assert np.all(np.abs(pot(radii)) < pot.range_epsilon)
