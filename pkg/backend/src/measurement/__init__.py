"""Pointer-state measurement chain"""
from .chain import (
    GlobalState,
    PointerJointDistribution,
    Stage,
    apply_first_measurement,
    apply_second_measurement,
    evolve_between_measurements,
    joint_pointer_distribution,
    prepare_global,
    run_pipeline,
)

__all__ = [
    "GlobalState",
    "PointerJointDistribution",
    "Stage",
    "apply_first_measurement",
    "apply_second_measurement",
    "evolve_between_measurements",
    "joint_pointer_distribution",
    "prepare_global",
    "run_pipeline",
]
