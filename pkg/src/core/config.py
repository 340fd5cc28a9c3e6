"""
Settings and experiment configuration.

LabSettings reads the environment (prefix DYNLAB_, `.env` honoured);
ExperimentConfig holds one run's parameters after merging defaults, the
config file and command-line flags, in that order.
"""

import logging
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.core.errors import ConfigError

logger = logging.getLogger(__name__)

EXPERIMENT_IDS = (
    "theorem-a",
    "theorem-b",
    "example1",
    "horseshoe",
    "asymptotic",
    "shadowing",
    "entropy",
)

OutputFormat = Literal["json", "csv"]


class LabSettings(BaseSettings):
    """Process-wide settings from the environment."""

    model_config = SettingsConfigDict(env_prefix="DYNLAB_", env_file=".env", extra="ignore")

    output_dir: Path = Field(default=Path("results"), description="Default report directory")
    log_level: str = Field(default="INFO", description="Logging level")
    float_tol: float = Field(default=1e-9, gt=0, description="Float comparison tolerance")


class ExperimentConfig(BaseModel):
    """
    Parameters of one run.

    Unset numeric fields fall back to the defaults of the experiment or
    subcommand that consumes them.

    Attributes:
        experiment: Experiment id or subcommand name
        system: System id (None lets the experiment choose)
        matrix: Four integers overriding the cat matrix
        epsilon: Ball radius c / separation scale
        delta: Pseudo-orbit, chain or closeness scale
        horizon: N
        depth: Word length m of horseshoe certificates
        seed: Random seed
        grid_step: Grid step (integer reciprocal)
        samples: Number of sampled points or pseudo-orbits
        n_max: Largest link block length
        out: Report path
        format: json or csv
    """

    model_config = ConfigDict(extra="forbid")

    experiment: str | None = Field(default=None, examples=["theorem-a"])
    system: str | None = Field(default=None, examples=["cat"])
    matrix: list[int] | None = Field(default=None, examples=[[2, 1, 1, 1]])
    epsilon: float | None = Field(default=None, gt=0)
    delta: float | None = Field(default=None, gt=0)
    horizon: int | None = Field(default=None, ge=1)
    depth: int | None = Field(default=None, ge=0, le=12)
    seed: int = Field(default=0, ge=0)
    grid_step: float | None = Field(default=None, gt=0, le=1)
    samples: int | None = Field(default=None, ge=1)
    n_max: int | None = Field(default=None, ge=1)
    out: Path | None = None
    format: OutputFormat = "json"

    @field_validator("matrix", mode="before")
    @classmethod
    def _split_matrix(cls, v: Any) -> Any:
        if isinstance(v, str):
            return [int(t) for t in v.replace(",", " ").split()]
        return v

    @field_validator("matrix")
    @classmethod
    def _four_entries(cls, v: list[int] | None) -> list[int] | None:
        if v is not None and len(v) != 4:
            raise ValueError(f"matrix needs four integers, got {len(v)}")
        return v

    @field_validator("grid_step")
    @classmethod
    def _integer_reciprocal(cls, v: float | None) -> float | None:
        if v is not None and abs(1.0 / v - round(1.0 / v)) > 1e-6:
            raise ValueError(f"grid step {v} does not divide 1")
        return v

    @classmethod
    def build(cls, *layers: dict[str, Any]) -> "ExperimentConfig":
        """
        Merge layers left to right, later non-None values winning.

        Raises:
            ConfigError: If the merged values fail validation
        """
        merged: dict[str, Any] = {}
        for layer in layers:
            merged.update({k: v for k, v in layer.items() if v is not None})
        try:
            return cls(**merged)
        except ValidationError as e:
            raise ConfigError(f"Invalid configuration: {e}") from e

    def get(self, name: str, default: Any) -> Any:
        """Field value, or default when unset."""
        value = getattr(self, name)
        return default if value is None else value

    def echo(self) -> dict[str, Any]:
        """JSON-safe copy for reports."""
        return self.model_dump(mode="json", exclude={"out"})
