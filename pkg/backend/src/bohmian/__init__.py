"""Bohmian guidance, trajectories and ensembles"""
from .ensemble import (
    Ensemble,
    TwoTimeEstimate,
    bohmian_two_time_expectation,
    equivariance_check,
    ks_distance,
    ks_scaling_check,
    sample_ensemble,
    transport_ensemble,
)
from .guidance import GuidanceField, guidance_velocity
from .trajectories import Trajectory, integrate_ensemble, integrate_trajectory

__all__ = [
    "Ensemble",
    "TwoTimeEstimate",
    "bohmian_two_time_expectation",
    "equivariance_check",
    "ks_distance",
    "ks_scaling_check",
    "sample_ensemble",
    "transport_ensemble",
    "GuidanceField",
    "guidance_velocity",
    "Trajectory",
    "integrate_ensemble",
    "integrate_trajectory",
]
