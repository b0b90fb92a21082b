"""
Bohmian guidance velocity dx/dt = (hbar/m) Im(psi'/psi)
"""
import logging

import numpy as np
from scipy.interpolate import CubicSpline

from src.core.errors import NearNodeError, OutOfDomainError
from src.core.grid import WaveFunction1D
from src.core.oscillator import OscillatorParams

logger = logging.getLogger(__name__)

NODE_FLOOR = 1e-10


def derivative(values: np.ndarray, h: float) -> np.ndarray:
    """
    Fourth-order centred finite difference on a uniform grid.

    The two outermost points on each side fall back to second order.
    """
    out = np.gradient(values, h, edge_order=2)
    if values.size >= 5:
        out[2:-2] = (
            -values[4:] + 8.0 * values[3:-1] - 8.0 * values[1:-3] + values[:-4]
        ) / (12.0 * h)
    return out


class GuidanceField:
    """
    Velocity field of one wave function, evaluable at off-grid positions.

    psi and psi' are interpolated with cubic splines; positions must lie in
    the range where the fourth-order stencil applies.
    """

    def __init__(self, psi: WaveFunction1D, params: OscillatorParams, floor: float = NODE_FLOOR):
        self.psi = psi
        self.ratio = params.hbar / params.mass
        self.floor = floor
        points = psi.grid.points
        amps = psi.amplitudes
        slope = derivative(amps, psi.grid.spacing)
        self.scale = float(np.max(np.abs(amps)))
        self.lower = points[2]
        self.upper = points[-3]
        stacked = np.column_stack([amps.real, amps.imag, slope.real, slope.imag])
        self._spline = CubicSpline(points, stacked, axis=0)

    def __call__(self, x):
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        outside = (x_arr < self.lower) | (x_arr > self.upper)
        if np.any(outside):
            bad = x_arr[outside][0]
            raise OutOfDomainError(
                f"Position {bad:.6g} outside grid interior [{self.lower:.6g}, {self.upper:.6g}]"
            )

        re, im, dre, dim = self._spline(x_arr).T
        mod2 = re * re + im * im
        ratio = np.sqrt(mod2) / self.scale if self.scale > 0 else np.zeros_like(mod2)
        low = ratio <= self.floor
        if np.any(low):
            k = int(np.argmax(low))
            raise NearNodeError(float(x_arr[k]), float(ratio[k]), self.floor)

        v = self.ratio * (re * dim - im * dre) / mod2
        return v if np.ndim(x) else float(v[0])


def guidance_velocity(psi: WaveFunction1D, x, params: OscillatorParams):
    """
    (hbar/m) Im(psi'(x)/psi(x)) at a position (or array of positions).

    Raises:
        OutOfDomainError: if x lies outside the grid interior
        NearNodeError: if |psi(x)| <= 1e-10 * max|psi|
    """
    return GuidanceField(psi, params)(x)
