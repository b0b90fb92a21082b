"""
Bohmian velocity field of the two-boson double-slit state and the sum law
d(x1 + x2)/dt = (hbar k / m L)(x1 + x2)
"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.integrate import solve_ivp

from src.bohmian.trajectories import DEFAULT_TOL, Trajectory
from src.core.errors import NearNodeError, StepUnderflowError, WindowExitError
from src.core.two_slit_wave import SlitParams, check_paraxial, two_slit_bracket

logger = logging.getLogger(__name__)

NODE_FLOOR = 1e-10
NODE_MARGIN = 1e-2
FD_STEP = 1e-3
ANALYTIC = "analytic"
FINITE_DIFFERENCE = "finite-difference"


class PairConfiguration(BaseModel):
    """Transverse positions of both particles on the screen plane y = L."""

    model_config = ConfigDict(frozen=True)

    x1: float
    x2: float

    def swapped(self) -> "PairConfiguration":
        return PairConfiguration(x1=self.x2, x2=self.x1)


class PairVelocity(BaseModel):
    model_config = ConfigDict(frozen=True)

    v1: float
    v2: float

    @property
    def total(self) -> float:
        return self.v1 + self.v2


def _analytic_phase_gradients(x1, x2, params: SlitParams):
    """
    Bracket B and d(arg B)/dx1, d(arg B)/dx2 in closed form.

    The prefactor exp(ik(y1 + y2)) / L^2 of Psi does not depend on x1 or x2,
    so Im(d log Psi / dx_i) equals d(arg B)/dx_i. In product form

        B = 2 exp(i (k/2L)(x1^2 + x2^2 + 2a^2)) cos(k a (x1 - x2) / L)

    the cosine is real, so arg B is the quadratic phase up to multiples of pi.
    Evaluating the product keeps full precision next to interference zeros,
    where the sum of the two exponentials cancels.
    """
    k, L, a = params.k, params.L, params.a
    common = k / (2 * L) * (x1**2 + x2**2 + 2 * a**2)
    bracket = 2.0 * np.exp(1j * common) * np.cos(k * a * (x1 - x2) / L)
    return bracket, k / L * x1, k / L * x2


def _stencil_phase_gradient(samples, h: float):
    """
    5-point derivative of arg B from samples at -2h, -h, +h, +2h.

    arg B jumps by pi where the bracket changes sign, so the phases are
    unwrapped with period pi before differencing. The unwrapped phase is
    quadratic, which the stencil differentiates exactly, so h only sets the
    rounding error: samples sit about h from any zero the center is close to.
    """
    phase = np.unwrap(np.angle(np.stack(samples)), period=np.pi, axis=0)
    return (phase[0] - 8.0 * phase[1] + 8.0 * phase[2] - phase[3]) / (12.0 * h)


def _fd_phase_gradients(x1, x2, params: SlitParams, h: float = FD_STEP):
    bracket = two_slit_bracket(x1, x2, params)
    g1 = _stencil_phase_gradient([two_slit_bracket(x1 + s * h, x2, params) for s in (-2, -1, 1, 2)], h)
    g2 = _stencil_phase_gradient([two_slit_bracket(x1, x2 + s * h, params) for s in (-2, -1, 1, 2)], h)
    return bracket, g1, g2


def velocities(x1, x2, params: SlitParams, method: str = ANALYTIC, floor: float = NODE_FLOOR):
    """
    Vectorized (v1, v2) = (hbar/m) Im(dPsi/dx_i / Psi) = (hbar/m) d(arg Psi)/dx_i.

    Raises:
        NearNodeError: where |Psi| <= floor * 2/L^2
    """
    if method == ANALYTIC:
        bracket, g1, g2 = _analytic_phase_gradients(x1, x2, params)
    elif method == FINITE_DIFFERENCE:
        bracket, g1, g2 = _fd_phase_gradients(x1, x2, params)
    else:
        raise ValueError(f"Unknown derivative method '{method}'")

    # |Psi| / (2/L^2) == |B| / 2
    ratio = np.abs(bracket) / 2.0
    if np.any(ratio <= floor):
        k = int(np.argmax(np.atleast_1d(ratio) <= floor))
        where = (np.atleast_1d(x1)[k], np.atleast_1d(x2)[k])
        raise NearNodeError(where, float(np.atleast_1d(ratio)[k]), floor)

    scale = params.hbar / params.mass
    return scale * g1, scale * g2


def pair_velocity_field(
    config: PairConfiguration, params: SlitParams, method: str = ANALYTIC
) -> PairVelocity:
    """
    Bohmian velocities of both particles at a configuration on the screen.

    Raises:
        ParaxialViolationError: if |x1| or |x2| exceeds L/10
        NearNodeError: at an interference zero of Psi
    """
    check_paraxial(np.array([config.x1, config.x2]), params)
    v1, v2 = velocities(config.x1, config.x2, params, method)
    return PairVelocity(v1=float(v1), v2=float(v2))


def predicted_sum_velocity(x1, x2, params: SlitParams):
    return params.sum_rate * (x1 + x2)


def integrate_pair_trajectories(
    initial: PairConfiguration,
    params: SlitParams,
    t_span: tuple[float, float],
    tol: float = DEFAULT_TOL,
    sample_times: Optional[Sequence[float]] = None,
) -> tuple[Trajectory, Trajectory]:
    """
    Integrate both particles through the stationary velocity field.

    Raises:
        WindowExitError: if either particle leaves |x| <= L/10 (carries the exit time)
        NearNodeError: if the pair runs into an interference zero
        StepUnderflowError: if the step size collapses
    """
    check_paraxial(np.array([initial.x1, initial.x2]), params)
    t_start, t_end = t_span
    if t_end <= t_start:
        raise ValueError(f"Time span must be increasing, got {t_span}")
    times = (
        np.linspace(t_start, t_end, 101) if sample_times is None else np.asarray(sample_times, dtype=float)
    )

    def rhs(t, y):
        v1, v2 = velocities(y[0], y[1], params)
        return [v1, v2]

    def leaves_window(t, y):
        return params.window - max(abs(y[0]), abs(y[1]))

    leaves_window.terminal = True
    leaves_window.direction = -1

    sol = solve_ivp(
        rhs,
        t_span,
        [initial.x1, initial.x2],
        method="RK45",
        t_eval=times,
        events=leaves_window,
        rtol=tol,
        atol=tol,
    )
    if sol.status == 1:
        exit_time = float(sol.t_events[0][0])
        at_exit = tuple(float(v) for v in sol.y_events[0][0])
        logger.warning(f"Pair left the paraxial window at t={exit_time:.6g}")
        raise WindowExitError(exit_time, at_exit)
    if sol.status == -1:
        raise StepUnderflowError(sol.message)

    first = Trajectory(times=sol.t, positions=sol.y[0])
    second = Trajectory(times=sol.t, positions=sol.y[1])
    return first, second


@dataclass(frozen=True)
class GhoseReport:
    """
    Outcome of sampling the sum law over the paraxial window.

    Deviations are |(v1 + v2) - (hbar k / m L)(x1 + x2)|.
    """

    n_samples: int
    n_skipped: int
    analytic_max_abs_dev: float
    analytic_median_abs_dev: float
    fd_max_abs_dev: float
    fd_median_abs_dev: float
    nonvanishing_fraction: float
    exchange_max_abs_dev: float
    scale: float
    x1: np.ndarray
    x2: np.ndarray
    v1: np.ndarray
    v2: np.ndarray

    @property
    def skipped_fraction(self) -> float:
        return self.n_skipped / self.n_samples

    @property
    def vsum(self) -> np.ndarray:
        return self.v1 + self.v2


def node_fraction_prescan(params: SlitParams, node_margin: float = NODE_MARGIN, resolution: int = 801) -> float:
    """Fraction of a dense window grid where |B|/2 < node_margin."""
    axis = np.linspace(-params.window, params.window, resolution)
    x1, x2 = np.meshgrid(axis, axis, indexing="ij")
    return float(np.mean(np.abs(two_slit_bracket(x1, x2, params)) / 2.0 < node_margin))


def ghose_claim_check(
    params: SlitParams, n_samples: int, seed: int, node_margin: float = NODE_MARGIN
) -> GhoseReport:
    """
    Sample configurations uniformly in the paraxial window and test the sum law
    on both derivative paths. Configurations within node_margin of an
    interference zero are skipped and counted.
    """
    if n_samples < 100:
        raise ValueError("Sum-law check needs at least 100 samples")

    rng = np.random.default_rng(seed)
    w = params.window
    x1 = rng.uniform(-w, w, n_samples)
    x2 = rng.uniform(-w, w, n_samples)

    keep = np.abs(two_slit_bracket(x1, x2, params)) / 2.0 >= max(node_margin, NODE_FLOOR)
    n_skipped = int(n_samples - keep.sum())
    if n_skipped:
        logger.warning(f"Skipped {n_skipped} of {n_samples} configurations near interference zeros")
    x1, x2 = x1[keep], x2[keep]

    predicted = predicted_sum_velocity(x1, x2, params)
    v1, v2 = velocities(x1, x2, params, ANALYTIC)
    fd1, fd2 = velocities(x1, x2, params, FINITE_DIFFERENCE)
    analytic_dev = np.abs(v1 + v2 - predicted)
    fd_dev = np.abs(fd1 + fd2 - predicted)

    swapped_v1, swapped_v2 = velocities(x2, x1, params, ANALYTIC)
    exchange_dev = np.maximum(np.abs(v1 - swapped_v2), np.abs(v2 - swapped_v1))

    off_axis = np.abs(x1 + x2) > 1e-6
    half_rate = 0.5 * params.sum_rate * np.abs(x1 + x2)
    nonvanishing = np.abs(v1 + v2)[off_axis] > half_rate[off_axis]
    nonvanishing_fraction = float(nonvanishing.mean()) if nonvanishing.size else 1.0

    report = GhoseReport(
        n_samples=n_samples,
        n_skipped=n_skipped,
        analytic_max_abs_dev=float(analytic_dev.max()),
        analytic_median_abs_dev=float(np.median(analytic_dev)),
        fd_max_abs_dev=float(fd_dev.max()),
        fd_median_abs_dev=float(np.median(fd_dev)),
        nonvanishing_fraction=nonvanishing_fraction,
        exchange_max_abs_dev=float(exchange_dev.max()),
        scale=params.sum_rate * 2.0 * w,
        x1=x1,
        x2=x2,
        v1=v1,
        v2=v2,
    )
    logger.info(
        f"Sum law over {x1.size} configurations: analytic max dev "
        f"{report.analytic_max_abs_dev:.3e}, finite-difference max dev {report.fd_max_abs_dev:.3e}"
    )
    return report
