"""
Unit tests for Grid1D and WaveFunction1D
"""
import numpy as np
import pytest
from pydantic import ValidationError

from src.core.errors import NormalizationError
from src.core.grid import Grid1D, WaveFunction1D
from src.core.oscillator import HOEigenbasis, OscillatorParams, ho_eigenstate
from src.quantum.correlations import DensityOperator, correlation_from_distribution, joint_two_time_distribution


class TestGrid1D:
    """Test cases for Grid1D"""

    @pytest.fixture
    def grid(self):
        """Default lab grid"""
        return Grid1D(x_min=-8.0, x_max=8.0, n=512)

    def test_spacing(self, grid):
        """Test uniform spacing (max - min) / (n - 1)"""
        assert grid.spacing == pytest.approx(16.0 / 511)
        assert np.allclose(np.diff(grid.points), grid.spacing, rtol=0, atol=1e-13)

    def test_endpoints(self, grid):
        """Test first and last points sit on the domain bounds"""
        assert grid.points[0] == pytest.approx(-8.0, abs=1e-12)
        assert grid.points[-1] == pytest.approx(8.0, abs=1e-12)
        assert grid.points.size == 512

    def test_points_strictly_increasing(self, grid):
        """Test point(i) is strictly increasing in i"""
        assert np.all(np.diff(grid.points) > 0)

    def test_symmetric_grid_is_exact_mirror(self, grid):
        """Test point(i) == -point(n-1-i) bit for bit on a symmetric grid"""
        assert grid.is_symmetric
        assert np.array_equal(grid.points, -grid.points[::-1])
        assert grid.point(grid.mirror_index(10)) == -grid.point(10)

    def test_invalid_grids(self):
        """Test rejection of n < 2 and empty domains"""
        with pytest.raises(ValidationError):
            Grid1D(x_min=-1.0, x_max=1.0, n=1)

        with pytest.raises(ValueError):
            Grid1D(x_min=1.0, x_max=1.0, n=10)

        with pytest.raises(ValueError):
            Grid1D(x_min=2.0, x_max=-2.0, n=10)

    def test_point_out_of_range(self, grid):
        """Test point() rejects indices outside the grid"""
        with pytest.raises(IndexError):
            grid.point(512)

        with pytest.raises(IndexError):
            grid.point(-1)

    def test_refined(self, grid):
        """Test refinement keeps the domain and divides the spacing"""
        fine = grid.refined(2)
        assert fine.n == 1023
        assert fine.spacing == pytest.approx(grid.spacing / 2)
        assert fine.x_min == grid.x_min and fine.x_max == grid.x_max

    def test_grid_is_frozen(self, grid):
        """Test grids are immutable value objects"""
        with pytest.raises(ValidationError):
            grid.n = 10


class TestWaveFunction1D:
    """Test cases for WaveFunction1D"""

    @pytest.fixture
    def grid(self):
        return Grid1D(x_min=-8.0, x_max=8.0, n=512)

    @pytest.fixture
    def gaussian(self, grid):
        """Normalized Gaussian exp(-x^2/2)"""
        return WaveFunction1D.from_function(grid, lambda x: np.exp(-0.5 * x**2))

    def test_from_function_normalizes(self, gaussian):
        """Test discrete renormalization on construction"""
        assert gaussian.normalized
        assert gaussian.norm() == pytest.approx(1.0, abs=1e-12)

    def test_wrong_length_rejected(self, grid):
        """Test amplitudes must have one entry per grid point"""
        with pytest.raises(ValueError):
            WaveFunction1D(grid=grid, amplitudes=np.ones(10))

    def test_non_finite_rejected(self, grid):
        """Test NaN or infinite amplitudes are rejected"""
        amps = np.ones(grid.n, dtype=complex)
        amps[3] = np.nan
        with pytest.raises(ValueError):
            WaveFunction1D(grid=grid, amplitudes=amps)

    def test_normalized_flag_checked(self, grid):
        """Test a wave function flagged normalized must have unit norm"""
        with pytest.raises(NormalizationError):
            WaveFunction1D(grid=grid, amplitudes=np.ones(grid.n), normalized=True)

    def test_require_normalized(self, grid):
        """Test the normalization precondition"""
        psi = WaveFunction1D(grid=grid, amplitudes=np.ones(grid.n))
        with pytest.raises(NormalizationError):
            psi.require_normalized()
        psi.normalize().require_normalized()

    def test_zero_function_cannot_be_normalized(self, grid):
        """Test normalizing a vanishing wave function"""
        with pytest.raises(NormalizationError):
            WaveFunction1D(grid=grid, amplitudes=np.zeros(grid.n)).normalize()

    def test_amplitudes_read_only(self, gaussian):
        """Test stored amplitudes cannot be mutated"""
        with pytest.raises(ValueError):
            gaussian.amplitudes[0] = 1.0

    def test_caller_array_untouched(self, grid):
        """Test the caller's array stays writable"""
        source = np.ones(grid.n)
        WaveFunction1D(grid=grid, amplitudes=source)
        source[0] = 2.0
        assert source[0] == 2.0

    def test_ket_convention(self, gaussian):
        """Test <x_i|psi> = psi_i * sqrt(spacing) carries unit norm"""
        assert np.sum(np.abs(gaussian.ket()) ** 2) == pytest.approx(1.0, abs=1e-12)

    def test_expectation_x2(self, gaussian):
        """Test <X^2> = 1/2 for the oscillator ground-state shape"""
        assert gaussian.expectation_x2() == pytest.approx(0.5, abs=1e-10)

    def test_is_real(self, gaussian, grid):
        """Test detection of purely real amplitudes"""
        assert gaussian.is_real()
        wave = WaveFunction1D.from_function(grid, lambda x: np.exp(1j * x - 0.5 * x**2))
        assert not wave.is_real()


class TestRefinement:
    """Test cases for grid convergence of lab observables"""

    def test_half_period_correlation_converged(self):
        """Test doubling the grid moves the tau = T/2 correlation by < 1e-6"""
        params = OscillatorParams(mass=1.0, omega=1.0)
        coarse = Grid1D(x_min=-8.0, x_max=8.0, n=128)

        values = []
        for grid in (coarse, coarse.refined()):
            basis = HOEigenbasis.complete(params, grid)
            rho = DensityOperator.pure(ho_eigenstate(0, params, grid))
            dist = joint_two_time_distribution(rho, 0.0, params.period / 2, basis)
            values.append(correlation_from_distribution(dist))

        assert coarse.refined().n == 255
        assert abs(values[1] - values[0]) < 1e-6
