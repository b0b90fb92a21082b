"""
Unit tests for Bohmian trajectory integration
"""
import numpy as np
import pytest

from src.bohmian.ensemble import born_cdf
from src.bohmian.trajectories import Trajectory, integrate_ensemble, integrate_trajectory
from src.core.errors import OutOfDomainError
from src.core.grid import Grid1D
from src.core.oscillator import EvolvingState, HOEigenbasis, OscillatorParams, ho_eigenstate, superposition


@pytest.fixture
def params():
    return OscillatorParams(mass=1.0, omega=1.0)


@pytest.fixture
def basis(params):
    return HOEigenbasis.build(params, Grid1D(x_min=-8.0, x_max=8.0, n=1024), nmax=40)


@pytest.fixture
def mixed(basis):
    """Evolving (|0> + |1>)/sqrt(2)"""
    return EvolvingState(superposition(basis, {0: 1.0, 1: 1.0}), basis)


class TestTrajectory:
    """Test cases for the Trajectory value type"""

    def test_valid(self):
        """Test construction and lookup at a sampled time"""
        traj = Trajectory(times=[0.0, 0.5, 1.0], positions=[0.1, 0.2, 0.3])
        assert traj.at(0.5) == 0.2

    def test_times_must_increase(self):
        """Test non-increasing times are rejected"""
        with pytest.raises(ValueError):
            Trajectory(times=[0.0, 0.0, 1.0], positions=[0.0, 0.0, 0.0])

    def test_shapes_must_match(self):
        """Test times and positions have equal length"""
        with pytest.raises(ValueError):
            Trajectory(times=[0.0, 1.0], positions=[0.0])

    def test_unsampled_time(self):
        """Test lookup at a time that was not sampled"""
        traj = Trajectory(times=[0.0, 1.0], positions=[0.0, 0.0])
        with pytest.raises(KeyError):
            traj.at(0.5)

    def test_read_only(self):
        """Test stored arrays are immutable"""
        traj = Trajectory(times=[0.0, 1.0], positions=[0.0, 0.0])
        with pytest.raises(ValueError):
            traj.positions[0] = 1.0


class TestIntegration:
    """Test cases for integrate_trajectory and integrate_ensemble"""

    def test_ground_state_is_constant(self, basis, params):
        """Test x(t) = x0 over a full period"""
        state = EvolvingState(ho_eigenstate(0, params, basis.grid), basis)
        for x0 in (-2.5, 0.0, 0.7, 3.1):
            traj = integrate_trajectory(x0, state, (0.0, params.period), params)
            assert np.max(np.abs(traj.positions - x0)) < 1e-9

    def test_ground_state_half_period(self, basis, params):
        """Test x(t1 + T/2) = x(t1)"""
        state = EvolvingState(ho_eigenstate(0, params, basis.grid), basis)
        t1, half = 0.4, params.period / 2
        traj = integrate_trajectory(1.2, state, (0.0, t1 + half), params, sample_times=[t1, t1 + half])
        assert traj.at(t1 + half) == pytest.approx(traj.at(t1), abs=1e-9)

    def test_requested_sample_times(self, mixed, params):
        """Test output is sampled exactly at the requested times"""
        times = [0.0, 0.3, 1.0, 2.0]
        traj = integrate_trajectory(0.2, mixed, (0.0, 2.0), params, sample_times=times)
        assert np.array_equal(traj.times, times)
        assert traj.positions[0] == 0.2

    def test_period_recurrence(self, mixed, params):
        """Test a superposition trajectory returns to its start after one period"""
        traj = integrate_trajectory(0.3, mixed, (0.0, params.period), params)
        assert traj.positions[-1] == pytest.approx(0.3, abs=1e-6)

    def test_quantile_conserved(self, mixed, params):
        """Test the Born quantile of a trajectory is constant in time"""
        half = params.period / 2
        x0 = 0.5
        traj = integrate_trajectory(x0, mixed, (0.0, half), params, sample_times=[0.0, half / 2, half])
        points = mixed.grid.points
        start = np.interp(x0, points, born_cdf(mixed.at(0.0)))
        for t in (half / 2, half):
            assert np.interp(traj.at(t), points, born_cdf(mixed.at(t))) == pytest.approx(start, abs=1e-4)

    def test_trajectories_never_cross(self, mixed, params):
        """Test ordering of starts is kept at every sampled time"""
        x0 = np.linspace(-2.0, 2.0, 9)
        times, positions = integrate_ensemble(x0, mixed, (0.0, params.period / 2), params)
        assert positions.shape == (9, times.size)
        assert np.all(np.diff(positions, axis=0) > 0)

    def test_ensemble_matches_single_members(self, mixed, params):
        """Test the shared integrator agrees with per-member runs"""
        x0 = [-1.5, 0.3, 2.0]
        times, positions = integrate_ensemble(x0, mixed, (0.0, 2.0), params)
        for row, start in zip(positions, x0):
            single = integrate_trajectory(start, mixed, (0.0, 2.0), params)
            assert np.array_equal(single.times, times)
            assert np.max(np.abs(single.positions - row)) < 1e-6

    def test_zero_span(self, mixed, params):
        """Test an empty span returns the starts"""
        times, positions = integrate_ensemble([0.1, 0.2], mixed, (1.0, 1.0), params)
        assert np.array_equal(times, [1.0])
        assert np.array_equal(positions, [[0.1], [0.2]])

    def test_start_outside_interior(self, mixed, params):
        """Test a start outside the grid interior is refused"""
        with pytest.raises(OutOfDomainError):
            integrate_trajectory(7.999, mixed, (0.0, 1.0), params)

    def test_invalid_arguments(self, mixed, params):
        """Test tolerance, span and sample-time validation"""
        with pytest.raises(ValueError):
            integrate_trajectory(0.0, mixed, (0.0, 1.0), params, tol=0.0)

        with pytest.raises(ValueError):
            integrate_trajectory(0.0, mixed, (1.0, 0.0), params)

        with pytest.raises(ValueError):
            integrate_trajectory(0.0, mixed, (0.0, 1.0), params, sample_times=[0.0, 2.0])
