"""
Unit tests for the two-boson double-slit velocity field and the sum law
"""
import math

import numpy as np
import pytest

from src.core.errors import NearNodeError, ParaxialViolationError, WindowExitError
from src.core.two_slit_wave import SlitParams, two_slit_bracket
from src.two_slit.pair_dynamics import (
    FINITE_DIFFERENCE,
    PairConfiguration,
    ghose_claim_check,
    integrate_pair_trajectories,
    node_fraction_prescan,
    pair_velocity_field,
    predicted_sum_velocity,
    velocities,
)


@pytest.fixture
def params():
    return SlitParams()


class TestPairVelocity:
    """Test cases for pair_velocity_field"""

    def test_sum_law(self, params):
        """Test v1 + v2 = (hbar k / m L)(x1 + x2)"""
        for x1, x2 in [(0.3, 0.5), (-2.0, 7.1), (4.4, -9.0)]:
            v = pair_velocity_field(PairConfiguration(x1=x1, x2=x2), params)
            assert v.total == pytest.approx(predicted_sum_velocity(x1, x2, params), abs=1e-11)

    def test_individual_velocities_linear(self, params):
        """Test each velocity is (hbar k / m L) x_i away from zeros"""
        v = pair_velocity_field(PairConfiguration(x1=1.3, x2=-0.45), params)
        assert v.v1 == pytest.approx(1.3 * params.sum_rate, abs=1e-11)
        assert v.v2 == pytest.approx(-0.45 * params.sum_rate, abs=1e-11)

    def test_finite_difference_path(self, params):
        """Test the finite-difference derivatives agree with the closed form"""
        config = PairConfiguration(x1=2.2, x2=-1.1)
        exact = pair_velocity_field(config, params)
        approx = pair_velocity_field(config, params, method=FINITE_DIFFERENCE)
        assert approx.v1 == pytest.approx(exact.v1, abs=1e-7)
        assert approx.v2 == pytest.approx(exact.v2, abs=1e-7)

    def test_finite_difference_near_zero(self, params):
        """Test both paths agree to 1e-7 relative where |B|/2 is about 2e-6"""
        x2 = np.linspace(1.0, 5.0, 50)
        x1 = x2 + math.pi / 2 + 2e-6
        assert np.allclose(np.abs(two_slit_bracket(x1, x2, params)) / 2.0, 2e-6, rtol=1e-3)

        exact1, exact2 = velocities(x1, x2, params)
        fd1, fd2 = velocities(x1, x2, params, FINITE_DIFFERENCE)
        assert np.max(np.abs(fd1 - exact1) / np.abs(exact1)) < 1e-7
        assert np.max(np.abs(fd2 - exact2) / np.abs(exact2)) < 1e-7

    def test_distinct_velocities(self, params):
        """Test v1 != v2 at random configurations off the diagonals"""
        rng = np.random.default_rng(11)
        x1, x2 = rng.uniform(-10.0, 10.0, size=(2, 400))
        away = (np.abs(x1 - x2) > 1e-3) & (np.abs(x1 + x2) > 1e-3)
        away &= np.abs(two_slit_bracket(x1, x2, params)) / 2.0 > 1e-6
        x1, x2 = x1[away][:100], x2[away][:100]
        assert x1.size == 100

        v1, v2 = velocities(x1, x2, params)
        assert np.all(np.abs(v1 - v2) > 0)

    def test_nonvanishing_sum(self, params):
        """Test the sum velocity does not vanish off the symmetry axis"""
        v = pair_velocity_field(PairConfiguration(x1=0.2, x2=0.1), params)
        assert v.total == pytest.approx(0.3, abs=1e-11)

    def test_exchange_covariance(self, params):
        """Test v1(x1, x2) = v2(x2, x1) bit for bit"""
        config = PairConfiguration(x1=3.7, x2=-2.9)
        v = pair_velocity_field(config, params)
        swapped = pair_velocity_field(config.swapped(), params)
        assert v.v1 == swapped.v2
        assert v.v2 == swapped.v1

    def test_mass_scaling(self):
        """Test the hbar k / m L prefactor"""
        p = SlitParams(k=50.0, mass=2.0, hbar=1.0)
        v = pair_velocity_field(PairConfiguration(x1=1.0, x2=0.4), p)
        assert v.total == pytest.approx(0.25 * 1.4, abs=1e-11)

    def test_node_raises(self, params):
        """Test an interference zero is refused"""
        x1 = math.pi * params.L / (2 * params.k * params.a)
        with pytest.raises(NearNodeError):
            pair_velocity_field(PairConfiguration(x1=x1, x2=0.0), params)

    def test_outside_window(self, params):
        """Test |x| > L/10 is refused"""
        with pytest.raises(ParaxialViolationError):
            pair_velocity_field(PairConfiguration(x1=11.0, x2=0.0), params)

    def test_unknown_method(self, params):
        """Test the derivative path must be known"""
        with pytest.raises(ValueError):
            velocities(0.1, 0.2, params, method="spectral")


class TestPairTrajectories:
    """Test cases for integrate_pair_trajectories"""

    def test_exponential_sum(self, params):
        """Test x1 + x2 grows as s(0) exp(hbar k t / m L)"""
        first, second = integrate_pair_trajectories(PairConfiguration(x1=0.06, x2=0.04), params, (0.0, 1.0))
        expected = 0.1 * np.exp(params.sum_rate * first.times)
        relative = np.abs(first.positions + second.positions - expected) / expected
        assert relative.max() < 1e-6

    def test_antisymmetric_start(self, params):
        """Test x1 + x2 stays 0 when it starts at 0"""
        first, second = integrate_pair_trajectories(PairConfiguration(x1=0.2, x2=-0.2), params, (0.0, 1.0))
        assert np.max(np.abs(first.positions + second.positions)) < 1e-9
        # the gap 0.4 exp(t) stays below the first zero at pi/2
        assert first.positions[-1] == pytest.approx(0.2 * math.e, rel=1e-6)

    def test_exchanged_start(self, params):
        """Test swapping the starts swaps the trajectories"""
        a1, a2 = integrate_pair_trajectories(PairConfiguration(x1=0.3, x2=-0.1), params, (0.0, 1.0))
        b1, b2 = integrate_pair_trajectories(PairConfiguration(x1=-0.1, x2=0.3), params, (0.0, 1.0))
        assert np.allclose(a1.positions, b2.positions, rtol=1e-12, atol=0)
        assert np.allclose(a2.positions, b1.positions, rtol=1e-12, atol=0)

    def test_window_exit(self, params):
        """Test leaving the window reports the exit time"""
        with pytest.raises(WindowExitError) as exc:
            integrate_pair_trajectories(PairConfiguration(x1=5.0, x2=5.0), params, (0.0, 2.0))
        # both x_i(t) = 5 exp(t) reach 10 at t = ln 2
        assert exc.value.exit_time == pytest.approx(math.log(2.0), rel=1e-6)
        assert exc.value.positions[0] == pytest.approx(10.0, rel=1e-6)

    def test_invalid_span(self, params):
        """Test a backwards span is refused"""
        with pytest.raises(ValueError):
            integrate_pair_trajectories(PairConfiguration(x1=0.1, x2=0.1), params, (1.0, 0.0))


class TestSumLawCheck:
    """Test cases for ghose_claim_check"""

    def test_small_run(self, params):
        """Test the residuals and bookkeeping on 2000 samples"""
        report = ghose_claim_check(params, 2000, seed=0)
        assert report.analytic_max_abs_dev < 1e-12 * report.scale
        assert report.fd_max_abs_dev < 1e-8 * report.scale
        assert report.nonvanishing_fraction == 1.0
        assert report.exchange_max_abs_dev == 0.0
        assert report.n_skipped + report.x1.size == 2000
        assert report.scale == pytest.approx(20.0)

    @pytest.mark.slow
    def test_default_run(self, params):
        """Test 10^4 samples at the default geometry"""
        report = ghose_claim_check(params, 10_000, seed=0)
        assert report.analytic_max_abs_dev < 1e-12 * report.scale
        assert report.fd_max_abs_dev < 1e-8 * report.scale
        assert report.skipped_fraction < 0.05

    def test_deterministic(self, params):
        """Test the same seed reproduces the sample"""
        a = ghose_claim_check(params, 200, seed=9)
        b = ghose_claim_check(params, 200, seed=9)
        assert np.array_equal(a.x1, b.x1)
        assert np.array_equal(a.vsum, b.vsum)

    def test_minimum_samples(self, params):
        """Test at least 100 samples are required"""
        with pytest.raises(ValueError):
            ghose_claim_check(params, 99, seed=0)

    def test_node_prescan(self, params):
        """Test zeros of the bracket cover a small part of the window"""
        fraction = node_fraction_prescan(params)
        assert 0.0 < fraction < 0.05
