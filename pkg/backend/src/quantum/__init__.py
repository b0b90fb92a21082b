"""Sequential-measurement and Heisenberg two-time correlations"""
from .correlations import (
    DensityOperator,
    TwoTimeJointDistribution,
    correlation_from_distribution,
    heisenberg_position_matrix,
    heisenberg_two_time_expectation,
    heisenberg_two_time_product,
    joint_two_time_distribution,
)

__all__ = [
    "DensityOperator",
    "TwoTimeJointDistribution",
    "correlation_from_distribution",
    "heisenberg_position_matrix",
    "heisenberg_two_time_expectation",
    "heisenberg_two_time_product",
    "joint_two_time_distribution",
]
