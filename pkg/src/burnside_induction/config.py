"""Configuration management for burnside-induction."""

import json
import os
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Optional

from dotenv import load_dotenv
from sympy import isprime

from .exceptions import ConfigError

OUTPUT_FORMATS = ("json", "table")


@dataclass(frozen=True)
class Limits:
    """Size caps guarding every enumeration."""

    max_group_order: int = 200
    max_subgroups: int = 10_000
    max_degree: int = 3
    max_points: int = 200_000

    @classmethod
    def from_env(cls) -> "Limits":
        """Load caps from environment variables (and a local .env file)."""
        load_dotenv()
        try:
            return cls(
                max_group_order=int(os.getenv("BURNSIDE_MAX_ORDER", str(cls.max_group_order))),
                max_subgroups=int(os.getenv("BURNSIDE_MAX_SUBGROUPS", str(cls.max_subgroups))),
                max_degree=int(os.getenv("BURNSIDE_MAX_DEGREE", str(cls.max_degree))),
                max_points=int(os.getenv("BURNSIDE_MAX_POINTS", str(cls.max_points))),
            )
        except ValueError as e:
            raise ConfigError(f"Limit variables must be integers: {e}") from e

    @classmethod
    def from_json(cls, path: str | Path) -> "Limits":
        """Load caps from a JSON file; unknown keys are rejected."""
        with open(path) as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError(f"{path} is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"{path} must hold a JSON object of limits")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"Unknown limit keys in {path}: {sorted(unknown)}")
        for key, value in data.items():
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ConfigError(f"Limit {key} must be a positive integer, got {value!r}")
        return cls(**data)

    def to_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass
class RunConfig:
    """Everything one CLI invocation needs."""

    subcommand: str
    group: Optional[str] = None
    functor: str = "burnside"
    gset: Optional[str] = None
    family: Optional[str] = None
    primes: list[int] = field(default_factory=list)
    degrees: int = 2
    output_format: str = "json"
    seed: int = 0
    verdict_exit: bool = True
    limits: Limits = field(default_factory=Limits)

    def validate(self) -> None:
        """Reject inconsistent combinations before any computation starts."""
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(
                f"Unknown output format '{self.output_format}', expected one of {OUTPUT_FORMATS}"
            )
        if self.degrees < 0:
            raise ConfigError(f"Degree count must be non-negative, got {self.degrees}")
        if self.degrees > self.limits.max_degree:
            raise ConfigError(
                f"Requested {self.degrees} degrees exceeds the degree cap "
                f"{self.limits.max_degree} (set BURNSIDE_MAX_DEGREE to raise it)"
            )
        for p in self.primes:
            if not isprime(p):
                raise ConfigError(f"Not a prime: {p}")

    def header(self) -> dict[str, Any]:
        """Run header echoed at the top of every JSON report."""
        return {"command": self.subcommand, "group": self.group, "seed": self.seed}


def load_config(
    config_path: Optional[str | Path] = None,
    **overrides: Any,
) -> RunConfig:
    """Load a run configuration.

    Args:
        config_path: Path to a JSON file with limit overrides.
        **overrides: RunConfig fields set explicitly (e.g. from argv).

    Returns:
        Validated run configuration.
    """
    limits = Limits.from_json(config_path) if config_path else Limits.from_env()
    config = RunConfig(limits=limits, **overrides)
    config.validate()
    return config
