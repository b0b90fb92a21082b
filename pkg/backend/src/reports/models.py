"""
Report models written as report.json
"""
from typing import Any, Literal, Optional

from pydantic import BaseModel, Field


class Metric(BaseModel):
    """
    One acceptance metric with its pass criterion.

    kind:
        close_to: |value - expected| <= tolerance
        at_most:  value <= tolerance
        at_least: value >= tolerance
        within:   expected_low <= value <= tolerance
    """

    value: float
    kind: Literal["close_to", "at_most", "at_least", "within"]
    tolerance: float
    expected: Optional[float] = None
    passed: bool

    @classmethod
    def close_to(cls, value: float, expected: float, tolerance: float) -> "Metric":
        return cls(
            value=value,
            kind="close_to",
            expected=expected,
            tolerance=tolerance,
            passed=bool(abs(value - expected) <= tolerance),
        )

    @classmethod
    def at_most(cls, value: float, bound: float) -> "Metric":
        return cls(value=value, kind="at_most", tolerance=bound, passed=bool(value <= bound))

    @classmethod
    def at_least(cls, value: float, bound: float) -> "Metric":
        return cls(value=value, kind="at_least", tolerance=bound, passed=bool(value >= bound))

    @classmethod
    def within(cls, value: float, low: float, high: float) -> "Metric":
        return cls(
            value=value,
            kind="within",
            expected=low,
            tolerance=high,
            passed=bool(low <= value <= high),
        )


class RunError(BaseModel):
    """Numerical failure raised by a module during the run."""

    type: str
    message: str


class RunReport(BaseModel):
    scenario: str
    config: dict[str, Any]
    metrics: dict[str, Metric] = Field(default_factory=dict)
    info: dict[str, float] = Field(default_factory=dict)
    artifacts: list[str] = Field(default_factory=list)
    wall_time_s: float = 0.0
    defaults_version: str
    versions: dict[str, str] = Field(default_factory=dict)
    error: Optional[RunError] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(m.passed for m in self.metrics.values())

    def failed_metrics(self) -> list[str]:
        return [name for name, m in self.metrics.items() if not m.passed]
