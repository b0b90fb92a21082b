"""
Bohmian trajectory integration with adaptive Runge-Kutta (Dormand-Prince 5(4))
"""
import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from src.core.errors import StepUnderflowError
from src.core.grid import WaveFunction1D
from src.core.oscillator import OscillatorParams

from .guidance import GuidanceField

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
DEFAULT_SAMPLES = 101

WaveSource = Callable[[float], WaveFunction1D]


@dataclass(frozen=True)
class Trajectory:
    """Positions x(t) sampled at strictly increasing times."""

    times: np.ndarray
    positions: np.ndarray

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        positions = np.array(self.positions, dtype=float)
        if times.shape != positions.shape or times.ndim != 1:
            raise ValueError("Trajectory times and positions must be 1-D and equal length")
        if times.size > 1 and np.any(np.diff(times) <= 0):
            raise ValueError("Trajectory times must be strictly increasing")
        if not np.all(np.isfinite(positions)):
            raise ValueError("Trajectory positions must be finite")
        times.setflags(write=False)
        positions.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "positions", positions)

    def at(self, t: float) -> float:
        """Position at a sampled time."""
        idx = np.flatnonzero(self.times == t)
        if idx.size == 0:
            raise KeyError(f"Time {t} was not sampled")
        return float(self.positions[idx[0]])


def _sample_times(t_span: tuple[float, float], sample_times: Optional[Sequence[float]]) -> np.ndarray:
    t_start, t_end = t_span
    if t_end < t_start:
        raise ValueError(f"Time span must be increasing, got {t_span}")
    if sample_times is None:
        if t_end == t_start:
            return np.array([t_start])
        return np.linspace(t_start, t_end, DEFAULT_SAMPLES)
    times = np.asarray(sample_times, dtype=float)
    if times.size > 1 and np.any(np.diff(times) <= 0):
        raise ValueError("Requested sample times must be strictly increasing")
    if times.size and (times[0] < t_start or times[-1] > t_end):
        raise ValueError("Requested sample times must lie inside the time span")
    return times


def integrate_ensemble(
    x0: Sequence[float],
    psi_of_t: WaveSource,
    t_span: tuple[float, float],
    params: OscillatorParams,
    tol: float = DEFAULT_TOL,
    sample_times: Optional[Sequence[float]] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Transport every member of an ensemble along dx/dt = v(psi(t), x).

    All members share one adaptive integrator, so the wave function and its
    velocity field are built once per Runge-Kutta stage. Step control uses the
    RMS error norm over all members, so a single member's local error is not
    bounded by tol on its own; integrate_trajectory gives a per-member bound.

    Returns:
        (times, positions) with positions of shape (len(x0), len(times))

    Raises:
        NearNodeError: if any member comes within the amplitude floor of a node
        StepUnderflowError: if the step size collapses
    """
    if tol <= 0:
        raise ValueError("Integrator tolerance must be positive")
    x0 = np.asarray(x0, dtype=float)
    times = _sample_times(t_span, sample_times)
    t_start, t_end = t_span

    if t_end == t_start:
        return times, np.repeat(x0[:, None], times.size, axis=1)

    def rhs(t, y):
        return GuidanceField(psi_of_t(t), params)(y)

    # the first stage checks that every start lies in the interior
    rhs(t_start, x0)
    sol = solve_ivp(rhs, (t_start, t_end), x0, method="RK45", t_eval=times, rtol=tol, atol=tol)
    if sol.status == -1:
        raise StepUnderflowError(f"Integration stopped at t={sol.t[-1] if sol.t.size else t_start}: {sol.message}")

    logger.debug(f"Transported {x0.size} members over {t_span} in {sol.nfev} evaluations")
    return sol.t, sol.y


def integrate_trajectory(
    x0: float,
    psi_of_t: WaveSource,
    t_span: tuple[float, float],
    params: OscillatorParams,
    tol: float = DEFAULT_TOL,
    sample_times: Optional[Sequence[float]] = None,
) -> Trajectory:
    """Single Bohmian trajectory starting at x0."""
    times, positions = integrate_ensemble([x0], psi_of_t, t_span, params, tol, sample_times)
    return Trajectory(times=times, positions=positions[0])
