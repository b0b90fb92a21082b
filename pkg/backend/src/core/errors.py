"""
Exception hierarchy for the pilot-wave lab
"""
from typing import Optional


class LabError(Exception):
    """Base class for every numerical failure raised by the lab."""


class DomainTooSmallError(LabError, ValueError):
    """The grid does not contain the eigenstate's classically forbidden tail."""


class TruncationInadequateError(LabError):
    """
    The truncated eigenbasis does not capture enough of a state's norm.

    Attributes:
        captured: Fraction of the norm recovered by the expansion
        threshold: Minimum fraction that was required
    """

    def __init__(self, captured: float, threshold: float, what: str = "state"):
        self.captured = captured
        self.threshold = threshold
        super().__init__(
            f"Eigenbasis captures {captured:.12f} of the {what} norm "
            f"(required >= {threshold})"
        )


class NormalizationError(LabError, ValueError):
    """Input wave function is not normalized on its grid."""


class NearNodeError(LabError):
    """
    Evaluation point sits on (or too close to) a node of the wave function.

    Attributes:
        position: Where the amplitude floor was violated
        ratio: |psi| relative to its reference scale at that point
    """

    def __init__(self, position, ratio: float, floor: float):
        self.position = position
        self.ratio = ratio
        self.floor = floor
        super().__init__(
            f"Amplitude ratio {ratio:.3e} below floor {floor:.1e} at {position}"
        )


class OutOfDomainError(LabError, ValueError):
    """Evaluation point lies outside the grid interior."""


class StepUnderflowError(LabError):
    """Adaptive step size collapsed before reaching the end of the span."""


class ParaxialViolationError(LabError, ValueError):
    """Transverse coordinate outside the paraxial window |x| <= L/10."""


class WindowExitError(LabError):
    """
    A pair trajectory left the paraxial window.

    Attributes:
        exit_time: Time at which the window boundary was crossed
        positions: (x1, x2) at the crossing
    """

    def __init__(self, exit_time: float, positions: Optional[tuple[float, float]] = None):
        self.exit_time = exit_time
        self.positions = positions
        super().__init__(f"Trajectory left the paraxial window at t={exit_time:.9g}")


class WrongStageError(LabError):
    """Measurement-chain operation called out of order."""


class ConfigError(ValueError):
    """Malformed scenario configuration."""
