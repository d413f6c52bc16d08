"""Workbench configuration with Pydantic validation."""

import json
import math
import os
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, field_validator, model_validator

from src.core.exceptions import ConfigError

CONFIG_FILE = Path("config.json")
CONFIG_EXAMPLE = Path("config.example.json")

MIN_FIT_SAMPLES = 8
MIN_FIT_DECADES = 4.0


class WorkbenchConfig(BaseModel):
    """Numeric cutoffs, sample schedules and parallelism."""

    max_workers: int = Field(
        default=4,
        description="Worker threads for sweeps and representation checks",
        gt=0,
        le=32,
    )
    delta_tail_bound: float = Field(
        default=1e-18,
        description="Truncation bound for the Delta product tail",
        gt=0,
        lt=1,
    )
    theta_tail_bound: float = Field(
        default=1e-16,
        description="Truncation bound for theta lattice sums",
        gt=0,
        lt=1,
    )
    beta1_x_min: float = Field(
        default=20.0, description="Smallest log(1/|t|) in the beta_1 sweep", gt=0
    )
    beta1_x_max: float = Field(
        default=2000.0, description="Largest log(1/|t|) in the beta_1 sweep", gt=0
    )
    beta1_samples: int = Field(
        default=24, description="Number of beta_1 sweep samples", gt=0
    )
    fay_omega0_imag: float = Field(
        default=1.2,
        description="Imaginary part of the genus-1 base point of the Fay path",
        gt=0,
    )
    fay_v: float = Field(
        default=0.2, description="Off-diagonal entry of the Fay path"
    )
    fay_x_min: float = Field(
        default=20.0, description="Smallest log(1/|t|) along the Fay path", gt=0
    )
    fay_x_max: float = Field(
        default=2000.0, description="Largest log(1/|t|) along the Fay path", gt=0
    )
    fay_samples: int = Field(
        default=16, description="Number of Fay path samples", gt=0
    )
    reducible_tau1_imag: float = Field(
        default=1.1, description="Imaginary part of tau_1 on the reducible path", gt=0
    )
    reducible_tau2_imag: float = Field(
        default=1.3, description="Imaginary part of tau_2 on the reducible path", gt=0
    )
    reducible_k_min: int = Field(
        default=3, description="First decade exponent, t = 10^-k", gt=0
    )
    reducible_k_max: int = Field(
        default=12, description="Last decade exponent, t = 10^-k", gt=0
    )

    @field_validator("fay_v")
    @classmethod
    def validate_fay_v(cls, v: float) -> float:
        """The Fay path needs a finite real off-diagonal entry."""
        if not math.isfinite(v):
            raise ValueError(f"fay_v must be finite, got {v}")
        return v

    @model_validator(mode="after")
    def validate_schedules(self) -> "WorkbenchConfig":
        """Each sweep must be fit-worthy: enough samples over enough decades."""
        for name, x_min, x_max, samples in (
            ("beta1", self.beta1_x_min, self.beta1_x_max, self.beta1_samples),
            ("fay", self.fay_x_min, self.fay_x_max, self.fay_samples),
        ):
            if x_max <= x_min:
                raise ValueError(f"{name}_x_max must exceed {name}_x_min")
            if (x_max - x_min) / math.log(10) < MIN_FIT_DECADES:
                raise ValueError(
                    f"{name} schedule spans fewer than {MIN_FIT_DECADES:g} decades"
                )
            if samples < MIN_FIT_SAMPLES:
                raise ValueError(
                    f"{name}_samples must be >= {MIN_FIT_SAMPLES}, got {samples}"
                )
        if self.reducible_k_max - self.reducible_k_min + 1 < 2:
            raise ValueError("reducible schedule needs at least two decades")
        return self

    def save(self, path: Path | None = None) -> None:
        """Save configuration to JSON file."""
        target = path or CONFIG_FILE
        data = self.model_dump(mode="json")
        target.write_text(json.dumps(data, indent=2) + "\n")

    @classmethod
    def load(cls, path: Path | None = None) -> "WorkbenchConfig":
        """Load configuration from JSON file, with env var overrides.

        Environment variables take precedence over config file values:
        - BIEXT_MAX_WORKERS overrides max_workers

        Returns:
            Loaded WorkbenchConfig instance.

        Raises:
            ConfigError: If config file contains invalid values.
        """
        target = path or CONFIG_FILE
        data: dict[str, Any] = {}
        if target.exists():
            try:
                data = json.loads(target.read_text())
            except json.JSONDecodeError as e:
                raise ConfigError(f"Invalid JSON in {target}: {e}") from e

        env_workers = os.environ.get("BIEXT_MAX_WORKERS")
        if env_workers:
            data["max_workers"] = env_workers

        try:
            return cls(**data)
        except Exception as e:
            raise ConfigError(f"Invalid configuration: {e}") from e

    def cutoffs(self) -> dict[str, float]:
        """Truncation bounds, as echoed in every output document."""
        return {
            "delta_tail_bound": self.delta_tail_bound,
            "theta_tail_bound": self.theta_tail_bound,
        }


def load_config(path: Path | None = None) -> WorkbenchConfig:
    """Load workbench config. Defaults apply when the file is missing."""
    return WorkbenchConfig.load(path)


def save_config(config: WorkbenchConfig, path: Path | None = None) -> None:
    """Save workbench config to file."""
    config.save(path)
