"""
Harmonic oscillator eigenstates and the spectral propagator U(t)
"""
import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .errors import DomainTooSmallError, TruncationInadequateError
from .grid import Grid1D, WaveFunction1D

logger = logging.getLogger(__name__)

TAIL_TOLERANCE = 1e-12
CAPTURE_THRESHOLD = 1.0 - 1e-8


class OscillatorParams(BaseModel):
    """Mass, angular frequency and hbar of the oscillator (natural units by default)."""

    model_config = ConfigDict(frozen=True)

    mass: float = Field(default=1.0, gt=0)
    omega: float = Field(default=1.0, gt=0)
    hbar: float = Field(default=1.0, gt=0)

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    @property
    def length_scale(self) -> float:
        """sqrt(hbar / m omega), the ground-state width unit."""
        return math.sqrt(self.hbar / (self.mass * self.omega))

    def energy(self, n):
        return self.hbar * self.omega * (np.asarray(n) + 0.5)

    def turning_point(self, n: int) -> float:
        """Classical turning point of level n."""
        return math.sqrt(2 * n + 1) * self.length_scale


def hermite_functions(xi: np.ndarray, nmax: int) -> np.ndarray:
    """
    Normalized Hermite functions h_0..h_nmax at dimensionless points xi.

    Uses the three-term recurrence on the normalized functions, so no raw
    Hermite polynomial is ever formed.

    Returns:
        Array of shape (nmax + 1, len(xi))
    """
    xi = np.asarray(xi, dtype=float)
    out = np.empty((nmax + 1, xi.size))
    out[0] = math.pi**-0.25 * np.exp(-0.5 * xi**2)
    if nmax >= 1:
        out[1] = math.sqrt(2.0) * xi * out[0]
    for n in range(1, nmax):
        out[n + 1] = (
            math.sqrt(2.0 / (n + 1)) * xi * out[n]
            - math.sqrt(n / (n + 1.0)) * out[n - 1]
        )
    return out


def _continuum_states(params: OscillatorParams, grid: Grid1D, nmax: int) -> np.ndarray:
    ell = params.length_scale
    return hermite_functions(grid.points / ell, nmax) / math.sqrt(ell)


def ho_eigenstate(n: int, params: OscillatorParams, grid: Grid1D) -> WaveFunction1D:
    """
    Oscillator eigenstate n sampled on the grid and discretely renormalized.

    Raises:
        DomainTooSmallError: if the state's amplitude at either boundary
            exceeds 1e-12
    """
    if n < 0:
        raise ValueError("Eigenstate index must be non-negative")

    values = _continuum_states(params, grid, n)[n]
    tail = max(abs(values[0]), abs(values[-1]))
    if tail > TAIL_TOLERANCE:
        raise DomainTooSmallError(
            f"State {n} has boundary amplitude {tail:.3e} on "
            f"[{grid.x_min}, {grid.x_max}]; turning point is "
            f"{params.turning_point(n):.3f}"
        )
    return WaveFunction1D(grid=grid, amplitudes=values).normalize()


def _orthonormalize(vectors: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(vectors)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def _parity_orthonormalize(raw: np.ndarray, grid: Grid1D) -> np.ndarray:
    """
    Orthonormalize columns within each parity sector on the upper half grid.

    Column k is mirrored back with parity (-1)^k, so the returned states are
    exactly even or odd on a symmetric grid whatever the conditioning.
    """
    size, count = raw.shape
    half = size // 2
    upper = np.arange(size - half, size)
    lower = size - 1 - upper
    centre = half if size % 2 else None
    out = np.zeros_like(raw)

    for parity in (0, 1):
        cols = np.arange(parity, count, 2)
        if cols.size == 0:
            continue
        block = math.sqrt(2.0) * raw[np.ix_(upper, cols)]
        if parity == 0 and centre is not None:
            block = np.vstack([block, raw[centre, cols]])
        q = _orthonormalize(block)
        sign = 1.0 if parity == 0 else -1.0
        out[np.ix_(upper, cols)] = q[:half] / math.sqrt(2.0)
        out[np.ix_(lower, cols)] = sign * q[:half] / math.sqrt(2.0)
        if parity == 0 and centre is not None:
            out[centre, cols] = q[half]
    return out


@dataclass(frozen=True)
class HOEigenbasis:
    """
    Truncated oscillator eigenbasis on a grid.

    `vectors[:, n]` holds the discrete orthonormal ket of level n
    (<x_i|n> = psi_n(x_i) * sqrt(spacing)); level n carries the energy
    hbar*omega*(n + 1/2). With nmax = grid.n - 1 the basis spans the grid and
    U(T/2) is exactly -i times parity.
    """

    params: OscillatorParams
    grid: Grid1D
    nmax: int
    vectors: np.ndarray

    @classmethod
    def build(cls, params: OscillatorParams, grid: Grid1D, nmax: int = 40) -> "HOEigenbasis":
        if nmax < 0:
            raise ValueError("nmax must be non-negative")
        if nmax > grid.n - 1:
            logger.warning(f"nmax={nmax} exceeds grid dimension, clamping to {grid.n - 1}")
            nmax = grid.n - 1
        reach = min(-grid.x_min, grid.x_max)
        if reach < params.turning_point(nmax):
            logger.warning(
                f"Grid reach {reach:.3f} does not cover turning point "
                f"{params.turning_point(nmax):.3f} of level {nmax}; high levels "
                f"are orthonormalized on the grid"
            )

        raw = _continuum_states(params, grid, nmax).T * math.sqrt(grid.spacing)
        norms = np.linalg.norm(raw, axis=0)
        norms[norms == 0] = 1.0
        raw = raw / norms

        if grid.is_symmetric:
            vectors = _parity_orthonormalize(raw, grid)
        else:
            vectors = _orthonormalize(raw)
        vectors.setflags(write=False)
        logger.debug(f"Built eigenbasis nmax={nmax} on grid n={grid.n}")
        return cls(params=params, grid=grid, nmax=nmax, vectors=vectors)

    @classmethod
    def complete(cls, params: OscillatorParams, grid: Grid1D) -> "HOEigenbasis":
        """Basis with one level per grid point; position kets are fully captured."""
        return cls.build(params, grid, nmax=grid.n - 1)

    @property
    def energies(self) -> np.ndarray:
        return self.params.energy(np.arange(self.nmax + 1))

    @property
    def states(self) -> list[WaveFunction1D]:
        scale = 1.0 / math.sqrt(self.grid.spacing)
        return [
            WaveFunction1D(grid=self.grid, amplitudes=self.vectors[:, n] * scale, normalized=True)
            for n in range(self.nmax + 1)
        ]

    def phases(self, t: float) -> np.ndarray:
        """exp(-i E_n t / hbar) for every level."""
        return np.exp(-1j * self.energies * t / self.params.hbar)

    def coefficients(self, psi: WaveFunction1D) -> np.ndarray:
        """<n|psi> for n = 0..nmax."""
        self._check_grid(psi.grid)
        return self.vectors.T @ psi.ket()

    def require_adequate(self, psi: WaveFunction1D, threshold: float = CAPTURE_THRESHOLD) -> np.ndarray:
        """Coefficients of psi, raising if the truncation loses too much norm."""
        c = self.coefficients(psi)
        captured = float(np.sum(np.abs(c) ** 2) / psi.norm())
        if captured < threshold:
            raise TruncationInadequateError(captured, threshold)
        return c

    def from_coefficients(self, coefficients: np.ndarray, time: float = 0.0) -> WaveFunction1D:
        amps = self.vectors @ np.asarray(coefficients) / math.sqrt(self.grid.spacing)
        return WaveFunction1D(grid=self.grid, amplitudes=amps, time=time)

    @cached_property
    def position_matrix(self) -> np.ndarray:
        """<n|X|n'> in the truncated basis."""
        x = self.grid.points
        return self.vectors.T @ (x[:, None] * self.vectors)

    def position_propagator(self, tau: float) -> np.ndarray:
        """K[j, i] = <x_j|U(tau)|x_i> restricted to the truncated basis."""
        return (self.vectors * self.phases(tau)) @ self.vectors.T

    def ket_captured(self) -> np.ndarray:
        """Captured norm of each position ket |x_i>."""
        return np.sum(self.vectors**2, axis=1)

    def _check_grid(self, grid: Grid1D) -> None:
        if grid != self.grid:
            raise ValueError("Wave function grid does not match the eigenbasis grid")


def propagate_ho(psi: WaveFunction1D, tau: float, basis: HOEigenbasis) -> WaveFunction1D:
    """
    Apply U(tau) = sum_n exp(-i E_n tau / hbar) |n><n| to psi.

    Raises:
        TruncationInadequateError: if the basis captures less than 1 - 1e-8
            of psi's norm
    """
    c = basis.require_adequate(psi)
    out = basis.from_coefficients(c * basis.phases(tau), time=psi.time + tau)
    return out


class EvolvingState:
    """
    Time-indexed wave function psi(t) = U(t - t0) psi0, evaluated spectrally.

    Holds only the immutable coefficient vector, so one instance can be shared
    across threads.
    """

    def __init__(self, psi0: WaveFunction1D, basis: HOEigenbasis):
        self.basis = basis
        self.t0 = psi0.time
        self.coefficients = basis.require_adequate(psi0)
        self.coefficients.setflags(write=False)

    @property
    def grid(self) -> Grid1D:
        return self.basis.grid

    def at(self, t: float) -> WaveFunction1D:
        phases = self.basis.phases(t - self.t0)
        return self.basis.from_coefficients(self.coefficients * phases, time=t)

    def __call__(self, t: float) -> WaveFunction1D:
        return self.at(t)

    def is_stationary(self, tolerance: float = 1e-8) -> bool:
        """True when a single energy level carries (almost) all of the weight."""
        weights = np.abs(self.coefficients) ** 2
        return bool(weights.max() >= (1.0 - tolerance) * weights.sum())


def displaced_ground_state(params: OscillatorParams, grid: Grid1D, shift: float) -> WaveFunction1D:
    """Ground state rigidly shifted by `shift` (a coherent state at t=0)."""
    ell = params.length_scale
    return WaveFunction1D.from_function(
        grid, lambda x: np.exp(-0.5 * ((x - shift) / ell) ** 2)
    )


def superposition(basis: HOEigenbasis, weights: dict[int, complex]) -> WaveFunction1D:
    """Normalized superposition sum_n w_n |n> of basis levels."""
    c = np.zeros(basis.nmax + 1, dtype=complex)
    for level, weight in weights.items():
        c[level] = weight
    c = c / np.linalg.norm(c)
    psi = basis.from_coefficients(c)
    return psi.normalize()
