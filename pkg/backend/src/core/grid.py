"""
Uniform position grid and grid-sampled wave functions
"""
from dataclasses import dataclass, replace

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import NormalizationError

NORM_TOLERANCE = 1e-10


class Grid1D(BaseModel):
    """
    Uniform grid of positions, the discrete |x> of the lab.

    Points are laid out symmetrically about the midpoint so that a grid with
    x_min = -x_max is exactly mirror-symmetric: point(i) == -point(n-1-i).
    """

    model_config = ConfigDict(frozen=True)

    x_min: float
    x_max: float
    n: int = Field(ge=2)

    @model_validator(mode="after")
    def _check_bounds(self) -> "Grid1D":
        if not self.x_max > self.x_min:
            raise ValueError("Grid requires x_max > x_min")
        return self

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        mid = 0.5 * (self.x_min + self.x_max)
        return mid + self.spacing * (np.arange(self.n) - 0.5 * (self.n - 1))

    @property
    def is_symmetric(self) -> bool:
        return self.x_min == -self.x_max

    def point(self, i: int) -> float:
        """Position of grid index i."""
        if not 0 <= i < self.n:
            raise IndexError(f"Grid index {i} outside [0, {self.n})")
        return float(self.points[i])

    def mirror_index(self, i: int) -> int:
        """Index of -point(i) on a symmetric grid."""
        return self.n - 1 - i

    def refined(self, factor: int = 2) -> "Grid1D":
        """Same domain with factor times as many intervals."""
        return Grid1D(x_min=self.x_min, x_max=self.x_max, n=factor * (self.n - 1) + 1)


@dataclass(frozen=True)
class WaveFunction1D:
    """
    Complex amplitudes psi(x_i) on a Grid1D.

    Amplitudes are continuum-normalized: sum |psi_i|^2 * spacing == 1 when
    normalized. The discrete ket component <x_i|psi> is psi_i * sqrt(spacing).
    """

    grid: Grid1D
    amplitudes: np.ndarray
    time: float = 0.0
    normalized: bool = False

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.grid.n,):
            raise ValueError(
                f"Expected {self.grid.n} amplitudes, got shape {amps.shape}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("Wave function amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        if self.normalized:
            norm = self.norm()
            if abs(norm - 1.0) > NORM_TOLERANCE:
                raise NormalizationError(
                    f"Wave function flagged normalized has norm {norm:.15f}"
                )

    @classmethod
    def from_function(cls, grid: Grid1D, func, time: float = 0.0, normalize: bool = True) -> "WaveFunction1D":
        """Sample func(x) on the grid, renormalizing discretely by default."""
        psi = cls(grid=grid, amplitudes=func(grid.points), time=time)
        return psi.normalize() if normalize else psi

    def norm(self) -> float:
        """Discrete norm sum |psi_i|^2 * spacing."""
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.grid.spacing)

    def density(self) -> np.ndarray:
        """|psi(x_i)|^2 (continuum density)."""
        return np.abs(self.amplitudes) ** 2

    def ket(self) -> np.ndarray:
        """Discrete components <x_i|psi> = psi_i * sqrt(spacing)."""
        return self.amplitudes * np.sqrt(self.grid.spacing)

    def normalize(self) -> "WaveFunction1D":
        norm = self.norm()
        if norm == 0.0:
            raise NormalizationError("Cannot normalize a vanishing wave function")
        return replace(self, amplitudes=self.amplitudes / np.sqrt(norm), normalized=True)

    def require_normalized(self, tolerance: float = 1e-8) -> None:
        norm = self.norm()
        if abs(norm - 1.0) > tolerance:
            raise NormalizationError(f"Wave function norm is {norm:.12f}, expected 1")

    def is_real(self) -> bool:
        return bool(np.all(self.amplitudes.imag == 0.0))

    def expectation_x2(self) -> float:
        """Quadrature value of <X^2> = sum x^2 |psi|^2 * spacing."""
        x = self.grid.points
        return float(np.sum(x**2 * self.density()) * self.grid.spacing)
