"""
Scenario configuration: defaults, key=value config files and validation
"""
import logging
import math
import os
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.errors import ConfigError
from src.core.grid import Grid1D
from src.core.oscillator import OscillatorParams
from src.core.two_slit_wave import SlitParams

logger = logging.getLogger(__name__)

DEFAULTS_VERSION = "1"
THREADS_ENV = "PWLAB_THREADS"

Scenario = Literal["neumaier-correlations", "measurement-chain", "ghose-two-slit", "equivariance"]
SCENARIOS: tuple[str, ...] = Scenario.__args__

COMMON_DEFAULTS: dict[str, Any] = {
    "seed": 0,
    "domain_min": -8.0,
    "domain_max": 8.0,
    "grid_n": 512,
    "nmax": 40,
    "tau_frac": 0.5,
    "t1_frac": 0.0,
    "samples": 10_000,
    "mass": 1.0,
    "omega": 1.0,
    "hbar": 1.0,
    "slit_k": 100.0,
    "slit_a": 1.0,
    "slit_L": 100.0,
    "pair_x1": 0.06,
    "pair_x2": 0.04,
    "t_end": 1.0,
    "integrator_tol": 1e-9,
}

SCENARIO_DEFAULTS: dict[str, dict[str, Any]] = {
    "neumaier-correlations": {"samples": 100_000},
    "measurement-chain": {"grid_n": 128, "nmax": None},
    "ghose-two-slit": {},
    "equivariance": {},
}

MIN_SAMPLES = {"ghose-two-slit": 100, "equivariance": 1000}


class ScenarioConfig(BaseModel):
    """
    Fully resolved parameters of one run. Unknown keys are rejected.

    A missing `nmax` means a complete basis (one level per grid point). A
    missing `threads` leaves the worker count to the thread pool.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    scenario: Scenario
    seed: int = Field(ge=0)
    grid_n: int = Field(ge=16, le=4096)
    domain_min: float
    domain_max: float
    nmax: Optional[int] = Field(default=None, ge=0)
    tau_frac: float = Field(ge=0.0, le=2.0)
    t1_frac: float = Field(ge=0.0, le=2.0)
    samples: int = Field(ge=1, le=10_000_000)
    mass: float = Field(gt=0)
    omega: float = Field(gt=0)
    hbar: float = Field(gt=0)
    slit_k: float = Field(gt=0)
    slit_a: float = Field(gt=0)
    slit_L: float = Field(gt=0)
    pair_x1: float
    pair_x2: float
    t_end: float = Field(gt=0)
    integrator_tol: float = Field(gt=0, le=1e-3)
    threads: Optional[int] = Field(default=None, ge=1)
    output_dir: str

    @model_validator(mode="before")
    @classmethod
    def _fill_defaults(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        scenario = data.get("scenario")
        merged = dict(COMMON_DEFAULTS)
        merged.update(SCENARIO_DEFAULTS.get(scenario, {}))
        merged["output_dir"] = f"runs/{scenario}"
        merged.update({k: v for k, v in data.items() if v is not None})
        return merged

    @model_validator(mode="after")
    def _check_ranges(self) -> "ScenarioConfig":
        if not self.domain_max > self.domain_min:
            raise ValueError("domain_max must exceed domain_min")
        if self.nmax is not None and self.nmax > self.grid_n - 1:
            raise ValueError(f"nmax={self.nmax} exceeds grid_n - 1 = {self.grid_n - 1}")
        minimum = MIN_SAMPLES.get(self.scenario, 1)
        if self.samples < minimum:
            raise ValueError(f"Scenario {self.scenario} needs samples >= {minimum}")
        self.slit()
        if max(abs(self.pair_x1), abs(self.pair_x2)) > self.slit_L / 10.0:
            raise ValueError("Initial pair configuration lies outside the paraxial window")
        return self

    def grid(self) -> Grid1D:
        return Grid1D(x_min=self.domain_min, x_max=self.domain_max, n=self.grid_n)

    def oscillator(self) -> OscillatorParams:
        return OscillatorParams(mass=self.mass, omega=self.omega, hbar=self.hbar)

    def slit(self) -> SlitParams:
        return SlitParams(k=self.slit_k, a=self.slit_a, L=self.slit_L, mass=self.mass, hbar=self.hbar)

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    @property
    def tau(self) -> float:
        return self.tau_frac * self.period

    @property
    def t1(self) -> float:
        return self.t1_frac * self.period

    @property
    def output_path(self) -> Path:
        return Path(self.output_dir)


def parse_config_file(path: Path) -> dict[str, str]:
    """
    Read a flat key=value file. Blank lines and '#' comments are ignored;
    `domain=MIN,MAX` expands to domain_min and domain_max.

    Raises:
        ConfigError: on a malformed or repeated key
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}") from e

    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got '{raw.strip()}'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key == "domain":
            lo, hi = parse_domain(value)
            pairs = {"domain_min": lo, "domain_max": hi}
        else:
            pairs = {key: value}
        for name, val in pairs.items():
            if name in values:
                raise ConfigError(f"{path}:{lineno}: key '{name}' given twice")
            values[name] = val
    return values


def parse_domain(value: str) -> tuple[str, str]:
    parts = [p.strip() for p in value.split(",")]
    if len(parts) != 2 or not all(parts):
        raise ConfigError(f"Domain must be MIN,MAX, got '{value}'")
    return parts[0], parts[1]


def load_config(scenario: str, config_file: Optional[Path] = None, overrides: Optional[dict] = None) -> ScenarioConfig:
    """
    Scenario defaults < config file < command-line overrides. The worker cap
    comes from PWLAB_THREADS unless `threads` is given explicitly.

    Raises:
        ConfigError: on a malformed file or PWLAB_THREADS value
        pydantic.ValidationError: on an invalid field
    """
    data: dict[str, Any] = {}
    if config_file is not None:
        data.update(parse_config_file(config_file))
    if "scenario" in data and data["scenario"] != scenario:
        raise ConfigError(f"Config file is for scenario '{data['scenario']}', not '{scenario}'")
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    data["scenario"] = scenario
    if data.get("threads") is None:
        data["threads"] = worker_threads()
    return ScenarioConfig(**data)


def worker_threads() -> Optional[int]:
    """Worker cap from PWLAB_THREADS; None lets the pool pick (0 or unset)."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return None
    try:
        count = int(raw)
    except ValueError as e:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got '{raw}'") from e
    if count < 0:
        raise ConfigError(f"{THREADS_ENV} must be >= 0")
    return count or None
