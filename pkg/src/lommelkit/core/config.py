"""
Configuration for lommelkit.

EvalOptions is the immutable numeric configuration passed to every evaluation.
Settings bundles EvalOptions with the sweep and logging sections of an
optional YAML settings file; environment variables override the file.
"""

import os
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field

DEFAULT_SETTINGS_FILE = ".lommelkit.yaml"

_ENV_OVERRIDES = {
    "LOMMEL_MAX_TERMS": ("max_terms", int),
    "LOMMEL_REL_TOL": ("rel_tol", float),
    "LOMMEL_SCALING_THRESHOLD": ("scaling_threshold", float),
}


class EvalOptions(BaseModel):
    """Numeric options shared by all evaluations.

    Attributes:
        rel_tol: Target relative truncation error of every series.
        max_terms: Term budget before NonConvergence is raised.
        scaling_threshold: Arguments above this are returned as e^{-x}·f(x).
        oracle_mode: Evaluate with the extended-precision oracle.
        oracle_dps: Working decimal digits of the oracle.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    rel_tol: float = Field(default=1e-15, gt=0.0, le=1e-6)
    max_terms: int = Field(default=10_000, ge=16)
    scaling_threshold: float = Field(default=50.0, gt=0.0)
    oracle_mode: bool = False
    oracle_dps: int = Field(default=40, ge=20, le=2000)

    def replace(self, **changes: Any) -> "EvalOptions":
        """Return a validated copy with the given fields changed."""
        return EvalOptions.model_validate({**self.model_dump(), **changes})

    @classmethod
    def from_env(cls, base: Optional[Dict[str, Any]] = None) -> "EvalOptions":
        """Build options from `base` with LOMMEL_* environment overrides applied."""
        values = dict(base or {})
        for var, (name, cast) in _ENV_OVERRIDES.items():
            raw = os.environ.get(var)
            if raw is not None and raw.strip() != "":
                values[name] = cast(raw)
        return cls.model_validate(values)


@dataclass
class SweepSettings:
    seed: int = 42
    samples: int = 10_000
    x_max: float = 60.0
    workers: int = 1


@dataclass
class Settings:
    eval: EvalOptions = field(default_factory=EvalOptions)
    sweep: SweepSettings = field(default_factory=SweepSettings)
    log_level: Optional[str] = None


def load_settings(path: Optional[str] = None) -> Settings:
    """
    Load settings from a YAML file.

    A missing default settings file falls back to defaults; a missing file that
    was named explicitly is an error.

    Args:
        path: Settings file path, or None for `.lommelkit.yaml` in the cwd.

    Returns:
        Settings with environment overrides applied to the eval section.
    """
    explicit = path is not None
    if path is None:
        path = DEFAULT_SETTINGS_FILE
    if not path.strip():
        raise ValueError("Settings file path cannot be empty")

    data: Dict[str, Any] = {}
    if os.path.exists(path):
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    elif explicit:
        raise FileNotFoundError(f"Settings file not found: {path}")

    sweep_data = data.get("sweep") or {}
    logging_data = data.get("logging") or {}
    return Settings(
        eval=EvalOptions.from_env(data.get("eval") or {}),
        sweep=SweepSettings(**sweep_data),
        log_level=logging_data.get("level"),
    )
