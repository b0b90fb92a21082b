"""Core components of the pilot-wave lab"""
from .errors import (
    ConfigError,
    DomainTooSmallError,
    LabError,
    NearNodeError,
    NormalizationError,
    OutOfDomainError,
    ParaxialViolationError,
    StepUnderflowError,
    TruncationInadequateError,
    WindowExitError,
    WrongStageError,
)
from .grid import Grid1D, WaveFunction1D
from .oscillator import (
    EvolvingState,
    HOEigenbasis,
    OscillatorParams,
    displaced_ground_state,
    ho_eigenstate,
    propagate_ho,
    superposition,
)
from .two_slit_wave import SlitParams, build_two_slit_wavefunction, single_slit_wave, two_slit_bracket

__all__ = [
    "ConfigError",
    "DomainTooSmallError",
    "LabError",
    "NearNodeError",
    "NormalizationError",
    "OutOfDomainError",
    "ParaxialViolationError",
    "StepUnderflowError",
    "TruncationInadequateError",
    "WindowExitError",
    "WrongStageError",
    "Grid1D",
    "WaveFunction1D",
    "EvolvingState",
    "HOEigenbasis",
    "OscillatorParams",
    "displaced_ground_state",
    "ho_eigenstate",
    "propagate_ho",
    "superposition",
    "SlitParams",
    "build_two_slit_wavefunction",
    "single_slit_wave",
    "two_slit_bracket",
]
