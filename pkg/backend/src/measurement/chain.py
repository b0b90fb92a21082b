"""
Pointer-state model of two sequential position measurements.

Two ideal apparatus A and B start in their ready states; each measurement
correlates a pointer label with the oscillator position branch by branch,
and the oscillator evolves freely in between.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Mapping

import numpy as np

from src.core.errors import TruncationInadequateError, WrongStageError
from src.core.grid import Grid1D, WaveFunction1D
from src.core.oscillator import HOEigenbasis

logger = logging.getLogger(__name__)

READY = -1
BRANCH_DEFICIT_LIMIT = 0.05
NORM_TOLERANCE = 1e-10

Key = tuple[int, int, int]


class Stage(str, Enum):
    INITIAL = "initial"
    AFTER_FIRST = "after-first"
    AFTER_EVOLUTION = "after-evolution"
    AFTER_SECOND = "after-second"


@dataclass(frozen=True)
class GlobalState:
    """
    Oscillator + two pointers, stored sparsely as
    (oscillator index, pointer-A label, pointer-B label) -> amplitude.

    Pointer labels are grid indices; READY marks an apparatus that has not
    yet measured.

    Attributes:
        truncation_deficit: Largest norm fraction lost by a branch during
            free evolution (0 before evolution or with a complete basis)
    """

    grid: Grid1D
    stage: Stage
    amplitudes: Mapping[Key, complex]
    truncation_deficit: float = 0.0
    tau: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", MappingProxyType(dict(self.amplitudes)))

    def amplitude(self, i: int, a: int, b: int) -> complex:
        return self.amplitudes.get((i, a, b), 0.0j)

    def total_probability(self) -> float:
        return math.fsum(abs(v) ** 2 for v in self.amplitudes.values())

    def branch_weights(self, which: str = "A") -> np.ndarray:
        """Born weight carried by each pointer label of apparatus A or B."""
        slot = {"A": 1, "B": 2}[which]
        weights = np.zeros(self.grid.n)
        for key, amp in self.amplitudes.items():
            label = key[slot]
            if label != READY:
                weights[label] += abs(amp) ** 2
        return weights


@dataclass(frozen=True)
class PointerJointDistribution:
    """p[a, b]: probability that pointer A reads a and pointer B reads b."""

    grid: Grid1D
    p: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        if np.min(p) < 0:
            raise ValueError("Pointer distribution has a negative entry")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    def total(self) -> float:
        return float(self.p.sum())

    def correlation(self) -> float:
        """sum_ab x_a x_b p[a, b]."""
        x = self.grid.points
        return float(x @ self.p @ x)


def _require_stage(state: GlobalState, expected: Stage) -> None:
    if state.stage is not expected:
        raise WrongStageError(
            f"Operation requires stage '{expected.value}', state is at '{state.stage.value}'"
        )


def prepare_global(psi0: WaveFunction1D) -> GlobalState:
    """Phi(0) = |psi0>|alpha_0>|beta_0>."""
    psi0.require_normalized(tolerance=NORM_TOLERANCE)
    ket = psi0.ket()
    amplitudes = {(i, READY, READY): complex(ket[i]) for i in range(psi0.grid.n)}
    return GlobalState(grid=psi0.grid, stage=Stage.INITIAL, amplitudes=amplitudes)


def apply_first_measurement(state: GlobalState) -> GlobalState:
    """Instantaneous premeasurement: pointer A takes the label of each branch."""
    _require_stage(state, Stage.INITIAL)
    amplitudes = {(i, i, b): amp for (i, _, b), amp in state.amplitudes.items()}
    return GlobalState(grid=state.grid, stage=Stage.AFTER_FIRST, amplitudes=amplitudes)


def evolve_between_measurements(state: GlobalState, tau: float, basis: HOEigenbasis) -> GlobalState:
    """
    Free oscillator evolution U(tau) applied branch by branch; both pointers
    are spectators.

    Raises:
        TruncationInadequateError: if any branch ket loses more than 5% of its
            norm to the eigenbasis truncation
    """
    _require_stage(state, Stage.AFTER_FIRST)
    if basis.grid != state.grid:
        raise ValueError("Eigenbasis grid does not match the global state grid")

    captured = basis.ket_captured()
    worst = float(captured.min())
    if 1.0 - worst > BRANCH_DEFICIT_LIMIT:
        raise TruncationInadequateError(worst, 1.0 - BRANCH_DEFICIT_LIMIT, what="branch ket")
    deficit = max(0.0, 1.0 - worst)

    kernel = basis.position_propagator(tau)
    amplitudes: dict[Key, complex] = {}
    for (i, a, b), amp in state.amplitudes.items():
        column = amp * kernel[:, i]
        for j, value in enumerate(column):
            key = (j, a, b)
            amplitudes[key] = amplitudes.get(key, 0.0j) + complex(value)

    logger.debug(f"Evolved {len(state.amplitudes)} branches by tau={tau:.6g}")
    if deficit > 1e-12:
        logger.warning(f"Branch evolution lost up to {deficit:.3e} of norm to truncation")
    return GlobalState(
        grid=state.grid,
        stage=Stage.AFTER_EVOLUTION,
        amplitudes=amplitudes,
        truncation_deficit=deficit,
        tau=tau,
    )


def apply_second_measurement(state: GlobalState) -> GlobalState:
    """Pointer B takes the label of the oscillator position in each branch."""
    _require_stage(state, Stage.AFTER_EVOLUTION)
    amplitudes = {(j, a, j): amp for (j, a, _), amp in state.amplitudes.items()}
    return GlobalState(
        grid=state.grid,
        stage=Stage.AFTER_SECOND,
        amplitudes=amplitudes,
        truncation_deficit=state.truncation_deficit,
        tau=state.tau,
    )


def joint_pointer_distribution(state: GlobalState) -> PointerJointDistribution:
    """Probability that pointer A truly reads x_a and pointer B truly reads x_b."""
    _require_stage(state, Stage.AFTER_SECOND)
    p = np.zeros((state.grid.n, state.grid.n))
    for (_, a, b), amp in state.amplitudes.items():
        p[a, b] += abs(amp) ** 2
    return PointerJointDistribution(grid=state.grid, p=p)


def run_pipeline(psi0: WaveFunction1D, tau: float, basis: HOEigenbasis) -> PointerJointDistribution:
    """prepare -> measure A -> evolve -> measure B -> pointer statistics."""
    state = prepare_global(psi0)
    state = apply_first_measurement(state)
    state = evolve_between_measurements(state, tau, basis)
    state = apply_second_measurement(state)
    return joint_pointer_distribution(state)
