"""
Symmetrized two-boson wave function behind a double slit (paraxial regime)
"""
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import ParaxialViolationError


class SlitParams(BaseModel):
    """
    Double-slit geometry: slits at x = +a (A) and x = -a (B), screen at y = L.
    """

    model_config = ConfigDict(frozen=True)

    k: float = Field(default=100.0, gt=0)
    a: float = Field(default=1.0, gt=0)
    L: float = Field(default=100.0, gt=0)
    mass: float = Field(default=1.0, gt=0)
    hbar: float = Field(default=1.0, gt=0)

    @model_validator(mode="after")
    def _check_geometry(self) -> "SlitParams":
        if self.L < 20.0 * self.a:
            raise ValueError(f"Screen distance L={self.L} must be at least 20*a={20 * self.a}")
        if self.k * self.a < 1.0:
            raise ValueError(f"k*a={self.k * self.a} too small to resolve fringes")
        return self

    @property
    def window(self) -> float:
        """Half width of the paraxial window, L/10."""
        return self.L / 10.0

    @property
    def amplitude_scale(self) -> float:
        """|Psi| scale 2/L^2 on the screen."""
        return 2.0 / self.L**2

    @property
    def sum_rate(self) -> float:
        """hbar k / (m L), the growth rate of x1 + x2."""
        return self.hbar * self.k / (self.mass * self.L)


def check_paraxial(x, params: SlitParams) -> None:
    if np.any(np.abs(x) > params.window):
        raise ParaxialViolationError(
            f"Transverse position {x} outside the paraxial window |x| <= {params.window}"
        )


def single_slit_wave(x, y, params: SlitParams, slit: int):
    """
    Spherical wave from slit A (slit=+1, at x=+a) or B (slit=-1, at x=-a),
    expanded to second order in the transverse offset.
    """
    if slit not in (1, -1):
        raise ValueError("slit must be +1 (A) or -1 (B)")
    L, k = params.L, params.k
    path = y + (x - slit * params.a) ** 2 / (2.0 * L)
    return np.exp(1j * k * path) / (L * (1.0 + (y - L) / L))


def _pair_terms(x1, x2, params: SlitParams):
    L = params.L
    first = single_slit_wave(x1, L, params, 1) * single_slit_wave(x2, L, params, -1)
    swapped = single_slit_wave(x2, L, params, 1) * single_slit_wave(x1, L, params, -1)
    return first, swapped


def evaluate_pair(x1, x2, params: SlitParams):
    """Psi(x1, x2) on the screen plane without the paraxial window check."""
    first, swapped = _pair_terms(x1, x2, params)
    return first + swapped


def build_two_slit_wavefunction(x1: float, x2: float, params: SlitParams) -> complex:
    """
    Psi(x1, L; x2, L) = psi_A(x1) psi_B(x2) + psi_A(x2) psi_B(x1).

    The exchanged product is formed from the same factors, so
    Psi(x1, x2) == Psi(x2, x1) bit for bit.

    Raises:
        ParaxialViolationError: if |x1| or |x2| exceeds L/10
    """
    check_paraxial(np.array([x1, x2]), params)
    return complex(evaluate_pair(x1, x2, params))


def two_slit_bracket(x1, x2, params: SlitParams):
    """
    The interference bracket of Psi with the common prefactor
    exp(ik(y1 + y2)) / L^2 divided out.
    """
    k, L, a = params.k, params.L, params.a
    return (
        np.exp(1j * k / (2 * L) * ((x1 - a) ** 2 + (x2 + a) ** 2))
        + np.exp(1j * k / (2 * L) * ((x1 + a) ** 2 + (x2 - a) ** 2))
    )
