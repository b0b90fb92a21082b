"""
Ensembles drawn from |psi|^2, two-time Bohmian averages and equivariance checks
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.stats import kstest

from src.core.grid import WaveFunction1D
from src.core.oscillator import EvolvingState, HOEigenbasis, OscillatorParams

from .trajectories import DEFAULT_TOL, integrate_ensemble

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Ensemble:
    """Seeded draw of initial positions; same seed and density give the same draw."""

    seed: int
    initial_positions: np.ndarray

    def __post_init__(self):
        positions = np.array(self.initial_positions, dtype=float)
        positions.setflags(write=False)
        object.__setattr__(self, "initial_positions", positions)

    @property
    def size(self) -> int:
        return int(self.initial_positions.size)


@dataclass(frozen=True)
class TwoTimeEstimate:
    """
    Bohmian average of x(t1 + tau) * x(t1).

    Attributes:
        monte_carlo: Ensemble average along trajectories
        quadrature: sum x^2 |psi0|^2 dx when trajectories are constant, else None
        stationary: Whether the constant-trajectory shortcut was taken
    """

    monte_carlo: float
    quadrature: Optional[float]
    stationary: bool

    @property
    def value(self) -> float:
        return self.quadrature if self.quadrature is not None else self.monte_carlo


def born_cdf(psi: WaveFunction1D) -> np.ndarray:
    """Piecewise-linear cumulative of |psi|^2 at the grid points, ending at 1."""
    cdf = cumulative_trapezoid(psi.density(), psi.grid.points, initial=0.0)
    return cdf / cdf[-1]


def sample_ensemble(psi: WaveFunction1D, n: int, seed: int) -> Ensemble:
    """
    Draw n positions from |psi|^2 by inverting the piecewise-linear CDF.

    Raises:
        NormalizationError: if psi is not normalized
    """
    if n < 1:
        raise ValueError("Ensemble size must be at least 1")
    psi.require_normalized()
    rng = np.random.default_rng(seed)
    u = rng.random(n)
    positions = np.interp(u, born_cdf(psi), psi.grid.points)
    return Ensemble(seed=seed, initial_positions=positions)


def ks_distance(samples: np.ndarray, psi: WaveFunction1D) -> float:
    """Kolmogorov-Smirnov distance between samples and the Born CDF of psi."""
    points = psi.grid.points
    cdf = born_cdf(psi)
    return float(kstest(samples, lambda x: np.interp(x, points, cdf)).statistic)


def bohmian_two_time_expectation(
    psi0: WaveFunction1D,
    t1: float,
    tau: float,
    params: OscillatorParams,
    n: int,
    seed: int,
    basis: Optional[HOEigenbasis] = None,
    tol: float = DEFAULT_TOL,
) -> TwoTimeEstimate:
    """
    Ensemble average of the true positions' product x(t1 + tau) x(t1).

    A real stationary state has vanishing velocity everywhere, so its
    trajectories are constant and the average reduces to the quadrature
    sum x^2 |psi0|^2 dx. Any other state is integrated. Without `basis` a
    default 41-level eigenbasis is built on psi0's grid.
    """
    if t1 < 0 or tau < 0:
        raise ValueError("Measurement times must be non-negative")
    ensemble = sample_ensemble(psi0, n, seed)
    x0 = ensemble.initial_positions

    if basis is None:
        basis = HOEigenbasis.build(params, psi0.grid)
    source = EvolvingState(psi0, basis)
    if psi0.is_real() and source.is_stationary():
        logger.info("Real stationary state: trajectories are constant")
        return TwoTimeEstimate(
            monte_carlo=float(np.mean(x0 * x0)),
            quadrature=psi0.expectation_x2(),
            stationary=True,
        )

    start = psi0.time
    wanted = np.array([start + t1, start + t1 + tau])
    sample_times = np.unique(np.concatenate([[start], wanted]))
    times, positions = integrate_ensemble(
        x0, source, (start, wanted[-1]), params, tol, sample_times
    )
    first = positions[:, np.searchsorted(times, wanted[0])]
    second = positions[:, np.searchsorted(times, wanted[1])]
    return TwoTimeEstimate(monte_carlo=float(np.mean(first * second)), quadrature=None, stationary=False)


def transport_ensemble(
    psi0: WaveFunction1D,
    t_end: float,
    n: int,
    seed: int,
    basis: HOEigenbasis,
    tol: float = DEFAULT_TOL,
    sample_times: Optional[Sequence[float]] = None,
) -> tuple[Ensemble, np.ndarray, np.ndarray]:
    """Sample from |psi0|^2 and carry every member to psi0.time + t_end."""
    ensemble = sample_ensemble(psi0, n, seed)
    source = EvolvingState(psi0, basis)
    span = (psi0.time, psi0.time + t_end)
    times, positions = integrate_ensemble(
        ensemble.initial_positions, source, span, basis.params, tol, sample_times
    )
    return ensemble, times, positions


def equivariance_check(
    psi0: WaveFunction1D,
    t_end: float,
    n: int,
    seed: int,
    basis: HOEigenbasis,
    tol: float = DEFAULT_TOL,
) -> float:
    """
    KS distance between the transported ensemble at t_end and |psi(t_end)|^2.
    """
    if n < 1000:
        raise ValueError("Equivariance check needs at least 1000 members")
    _, _, positions = transport_ensemble(
        psi0, t_end, n, seed, basis, tol, sample_times=[psi0.time, psi0.time + t_end] if t_end > 0 else None
    )
    target = EvolvingState(psi0, basis).at(psi0.time + t_end)
    distance = ks_distance(positions[:, -1], target)
    logger.info(f"Equivariance KS distance {distance:.5f} (n={n}, seed={seed}, t_end={t_end:.6g})")
    return distance


def ks_scaling_check(
    psi0: WaveFunction1D,
    t_end: float,
    n: int,
    seeds: Sequence[int],
    basis: HOEigenbasis,
    max_workers: Optional[int] = None,
) -> float:
    """
    Ratio of median KS distances at n and 4n members over a seed family.

    Sampling noise scales as n^(-1/2), so the ratio should be close to 2.
    """
    def run(args):
        size, seed = args
        return equivariance_check(psi0, t_end, size, seed, basis)

    jobs = [(n, s) for s in seeds] + [(4 * n, s) for s in seeds]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        results = list(pool.map(run, jobs))
    small = np.median(results[: len(seeds)])
    large = np.median(results[len(seeds):])
    return float(small / large)
