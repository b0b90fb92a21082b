"""Two-boson double-slit velocity field"""
from .pair_dynamics import (
    PairConfiguration,
    PairVelocity,
    ghose_claim_check,
    integrate_pair_trajectories,
    pair_velocity_field,
)

__all__ = [
    "PairConfiguration",
    "PairVelocity",
    "ghose_claim_check",
    "integrate_pair_trajectories",
    "pair_velocity_field",
]
