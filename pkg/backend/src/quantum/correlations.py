"""
Copenhagen-side two-time quantities: Heisenberg products and the
sequential-measurement joint distribution
"""
import logging
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from src.core.errors import TruncationInadequateError
from src.core.grid import Grid1D, WaveFunction1D
from src.core.oscillator import CAPTURE_THRESHOLD, HOEigenbasis

logger = logging.getLogger(__name__)

KET_CAPTURE_THRESHOLD = 0.95
NEGATIVE_CLAMP = -1e-14


@dataclass(frozen=True)
class DensityOperator:
    """
    Density kernel rho(x_i, x_j) on a grid.

    The discrete operator is matrix * spacing, so the trace condition reads
    trace(matrix) * spacing == 1.
    """

    grid: Grid1D
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.shape != (self.grid.n, self.grid.n):
            raise ValueError(f"Density matrix must be {self.grid.n}x{self.grid.n}")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError("Density matrix is not Hermitian")
        trace = float(np.real(np.trace(m))) * self.grid.spacing
        if abs(trace - 1.0) > 1e-10:
            raise ValueError(f"Density matrix trace is {trace:.12f}, expected 1")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def pure(cls, psi: WaveFunction1D) -> "DensityOperator":
        """rho = |psi><psi|."""
        psi.require_normalized()
        a = psi.amplitudes
        return cls(grid=psi.grid, matrix=np.outer(a, a.conj()))

    @classmethod
    def mixture(cls, components: Iterable[tuple[float, WaveFunction1D]]) -> "DensityOperator":
        """Convex combination sum_k w_k |psi_k><psi_k| with weights summing to 1."""
        components = list(components)
        if not components:
            raise ValueError("Mixture needs at least one component")
        weights = np.array([w for w, _ in components], dtype=float)
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
            raise ValueError("Mixture weights must be non-negative and sum to 1")
        grid = components[0][1].grid
        matrix = np.zeros((grid.n, grid.n), dtype=complex)
        for weight, psi in components:
            psi.require_normalized()
            matrix += weight * np.outer(psi.amplitudes, psi.amplitudes.conj())
        return cls(grid=grid, matrix=matrix)

    def discrete(self) -> np.ndarray:
        """<x_i|rho|x_j>."""
        return self.matrix * self.grid.spacing


@dataclass(frozen=True)
class TwoTimeJointDistribution:
    """
    p[i, j] = P(x_i, t1; x_j, t1 + tau) under the discrete-outcome convention.

    Attributes:
        truncation_deficit: Largest norm fraction of a position ket lost by
            the eigenbasis truncation (0 for a complete basis)
    """

    grid: Grid1D
    t1: float
    tau: float
    p: np.ndarray
    truncation_deficit: float = 0.0

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        if p.shape != (self.grid.n, self.grid.n):
            raise ValueError(f"Joint distribution must be {self.grid.n}x{self.grid.n}")
        if np.min(p) < NEGATIVE_CLAMP:
            raise ValueError(f"Joint distribution has negative entry {np.min(p):.3e}")
        p[p < 0] = 0.0
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    def total(self) -> float:
        return float(self.p.sum())

    def marginal_first(self) -> np.ndarray:
        """Probability of each outcome of the first measurement."""
        return self.p.sum(axis=1)

    def marginal_second(self) -> np.ndarray:
        """Probability of each outcome of the second measurement."""
        return self.p.sum(axis=0)


def _check_times(t1: float, tau: float) -> None:
    if t1 < 0 or tau < 0:
        raise ValueError(f"Measurement times must be non-negative (t1={t1}, tau={tau})")


def joint_two_time_distribution(
    rho: DensityOperator, t1: float, tau: float, basis: HOEigenbasis
) -> TwoTimeJointDistribution:
    """
    Sequential position measurements at t1 and t1 + tau:

        p[i, j] = |<x_j|U(tau)|x_i>|^2 * <x_i|U(t1) rho U^dagger(t1)|x_i>

    Raises:
        TruncationInadequateError: if rho is not captured by the basis to
            1 - 1e-8, or some position ket loses more than 5% of its norm
    """
    _check_times(t1, tau)
    if rho.grid != basis.grid:
        raise ValueError("Density operator grid does not match the eigenbasis grid")

    r = rho.discrete()
    v = basis.vectors
    captured = float(np.real(np.trace(v.T @ r @ v)))
    if captured < CAPTURE_THRESHOLD:
        raise TruncationInadequateError(captured, CAPTURE_THRESHOLD, what="density operator")

    ket_captured = basis.ket_captured()
    worst = float(ket_captured.min())
    if worst < KET_CAPTURE_THRESHOLD:
        raise TruncationInadequateError(worst, KET_CAPTURE_THRESHOLD, what="position ket")
    deficit = max(0.0, 1.0 - worst)
    if deficit > 1e-12:
        logger.warning(f"Position kets lose up to {deficit:.3e} of their norm to truncation")

    g = basis.position_propagator(t1)
    weights = np.real(np.sum((g @ r) * g.conj(), axis=1))
    k = basis.position_propagator(tau)
    p = weights[:, None] * np.abs(k.T) ** 2

    logger.debug(f"Joint distribution t1={t1:.6g} tau={tau:.6g} total={p.sum():.15f}")
    return TwoTimeJointDistribution(grid=rho.grid, t1=t1, tau=tau, p=p, truncation_deficit=deficit)


def correlation_from_distribution(dist: TwoTimeJointDistribution) -> float:
    """sum_ij x_i x_j p[i, j]."""
    x = dist.grid.points
    return float(x @ dist.p @ x)


def heisenberg_position_matrix(basis: HOEigenbasis, t: float) -> np.ndarray:
    """Matrix of X(t) = U^dagger(t) X U(t) in the truncated eigenbasis."""
    phases = basis.phases(t)
    return phases.conj()[:, None] * basis.position_matrix * phases[None, :]


def heisenberg_two_time_product(
    psi0: WaveFunction1D, t1: float, tau: float, basis: HOEigenbasis
) -> complex:
    """<psi0| X(t1 + tau) X(t1) |psi0>, the full (generally complex) product."""
    _check_times(t1, tau)
    c = basis.require_adequate(psi0)
    x = basis.position_matrix
    right = x @ (basis.phases(tau) * (x @ (basis.phases(t1) * c)))
    left = basis.phases(t1 + tau) * c
    return complex(np.vdot(left, right))


def heisenberg_two_time_expectation(
    psi0: WaveFunction1D, t1: float, tau: float, basis: HOEigenbasis
) -> float:
    """
    Re <psi0| X(t1 + tau) X(t1) |psi0>, i.e. the symmetrized correlation
    (1/2)<{X(t1 + tau), X(t1)}>.
    """
    return heisenberg_two_time_product(psi0, t1, tau, basis).real
