"""Experiment description, shipped profiles and sweep presets.

An experiment pairs a base scenario with a one-dimensional sweep over one of
seven axes. Every (sweep value, trial) pair draws one scenario realization
that all schemes share.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.baselines import Scheme
from src.channel import FriErrorModel, ScenarioConfig
from src.inner_loop import SolverConfig
from src.pso import PsoParams


SweepAxis = Literal["M", "K", "L", "A_over_lambda", "pmax_dbm", "mu", "delta"]

INTEGER_AXES: frozenset[str] = frozenset({"M", "K", "L"})
FRI_AXES: frozenset[str] = frozenset({"mu", "delta"})

_SCENARIO_FIELD: dict[str, str] = {
    "M": "num_antennas",
    "K": "num_users",
    "L": "num_paths",
    "A_over_lambda": "a_over_lambda",
    "pmax_dbm": "pmax_dbm",
}

MAX_SEED = (1 << 64) - 1


class SweepSpec(BaseModel):
    """Swept parameter and its values."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    param: SweepAxis
    values: tuple[float, ...] = Field(..., min_length=1)

    @model_validator(mode="after")
    def _check_values(self) -> SweepSpec:
        if len(set(self.values)) != len(self.values):
            raise ValueError(f"duplicate {self.param} sweep values: {self.values}")
        if self.param in INTEGER_AXES:
            bad = [v for v in self.values if v != int(v) or v < 1]
            if bad:
                raise ValueError(
                    f"{self.param} sweep needs positive integers, got {bad}"
                )
        if self.param in FRI_AXES and any(v < 0 for v in self.values):
            raise ValueError(f"{self.param} sweep values must be non-negative")
        return self


class ExperimentSpec(BaseModel):
    """Complete description of one experiment.

    When ``sweep`` is omitted the experiment is a single point, recorded as an
    ``M`` sweep over the base antenna count.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = "run"
    base: ScenarioConfig = Field(default_factory=ScenarioConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    pso: PsoParams = Field(default_factory=PsoParams)
    fri: FriErrorModel = Field(default_factory=FriErrorModel)
    schemes: tuple[Scheme, ...] = Field(default=(Scheme.MA,), min_length=1)
    sweep: SweepSpec | None = None
    trials: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0, le=MAX_SEED)
    aps_max_cycles: int = Field(default=10, ge=1)
    output: Path | None = None
    timing: bool = False

    @field_validator("schemes")
    @classmethod
    def _unique_schemes(cls, schemes: tuple[Scheme, ...]) -> tuple[Scheme, ...]:
        if len(set(schemes)) != len(schemes):
            raise ValueError(f"duplicate schemes in {[s.value for s in schemes]}")
        return schemes

    @property
    def effective_sweep(self) -> SweepSpec:
        if self.sweep is not None:
            return self.sweep
        return SweepSpec(param="M", values=(float(self.base.num_antennas),))


def apply_sweep(
    spec: ExperimentSpec, value: float
) -> tuple[ScenarioConfig, FriErrorModel]:
    """Scenario and error model at one sweep point.

    Raises:
        pydantic.ValidationError: If the swept value makes the scenario invalid
    """
    param = spec.effective_sweep.param
    if param in FRI_AXES:
        return spec.base, spec.fri.model_copy(update={param: float(value)})
    updated: dict[str, Any] = spec.base.model_dump()
    swept = int(value) if param in INTEGER_AXES else float(value)
    updated[_SCENARIO_FIELD[param]] = swept
    return ScenarioConfig.model_validate(updated), spec.fri


# ============================================================================
# Profiles
# ============================================================================

# Keys are the canonical configuration names used in TOML files
PROFILES: dict[str, dict[str, dict[str, Any]]] = {
    "table1": {
        "scenario": {
            "M": 16,
            "K": 12,
            "L": 10,
            "lambda_m": 0.1,
            "A_over_lambda": 3.0,
            "D_over_lambda": 0.5,
            "rho_db": -40.0,
            "alpha": 2.8,
            "sigma2_dbm": -80.0,
            "pmax_dbm": 10.0,
            "dmin_m": 20.0,
            "dmax_m": 100.0,
        },
        "solver": {"epsilon": 1e-3, "xi": 1e-3},
        "pso": {
            "N": 200,
            "T": 300,
            "c1": 1.4,
            "c2": 1.4,
            "omega_min": 0.4,
            "omega_max": 0.9,
            "tau": 10.0,
        },
        "experiment": {"trials": 1000},
    },
    "desk": {
        "scenario": {
            "M": 6,
            "K": 4,
            "L": 6,
            "lambda_m": 0.1,
            "A_over_lambda": 3.0,
            "D_over_lambda": 0.5,
            "rho_db": -40.0,
            "alpha": 2.8,
            "sigma2_dbm": -80.0,
            "pmax_dbm": 10.0,
            "dmin_m": 20.0,
            "dmax_m": 100.0,
        },
        "solver": {"epsilon": 1e-3, "xi": 1e-3},
        "pso": {
            "N": 30,
            "T": 80,
            "c1": 1.4,
            "c2": 1.4,
            "omega_min": 0.4,
            "omega_max": 0.9,
            "tau": 10.0,
            "per_coordinate": True,
        },
        "experiment": {"trials": 100},
    },
}

SWEEP_PRESETS: dict[str, dict[str, tuple[float, ...]]] = {
    "table1": {
        "M": (12, 14, 16, 18, 20),
        "K": (4, 6, 8, 10, 12, 14, 16),
        "A_over_lambda": (1.5, 2, 2.5, 3, 3.5, 4),
        "pmax_dbm": (0, 5, 10, 15, 20, 25, 30),
        "L": (4, 6, 8, 10, 12, 14, 16),
        "mu": (0, 0.05, 0.1, 0.15, 0.2),
        "delta": (0, 0.025, 0.05, 0.075, 0.1),
    },
    "desk": {
        "M": (4, 6, 8),
        "K": (2, 3, 4),
        "A_over_lambda": (1, 2, 3),
        "pmax_dbm": (0, 10, 20, 30),
        "L": (2, 4, 6, 8),
        "mu": (0, 0.1, 0.2),
        "delta": (0, 0.05, 0.1),
    },
}


def sweep_preset(profile: str, param: str) -> SweepSpec:
    """Preset sweep values of a profile."""
    try:
        values = SWEEP_PRESETS[profile][param]
    except KeyError:
        raise KeyError(f"no sweep preset for {profile!r}/{param!r}") from None
    return SweepSpec.model_validate({"param": param, "values": values})
