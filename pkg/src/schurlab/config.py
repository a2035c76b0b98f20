"""Run configuration for the command-line front end."""
from __future__ import annotations

import os
from dataclasses import dataclass, fields

COMMANDS = ("enumerate", "classify", "schurity", "sample", "dual", "closure", "invariants")
ENV_BUDGET = "SCHURLAB_MAX_SECONDS"
DEFAULT_BUDGET = 3600.0


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    group: str | None = None
    in_path: str | None = None
    out_path: str | None = None
    seed: int = 0
    count: int | None = None
    max_seconds: float = DEFAULT_BUDGET
    jobs: int = 1
    suite: str | None = None
    progress: bool = False
    reproducible: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        if self.max_seconds <= 0:
            raise ConfigError("--max-seconds must be positive")
        if self.count is not None and self.count < 0:
            raise ConfigError("--count must be non-negative")

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        return cls(**d)


def budget_default() -> float:
    raw = os.environ.get(ENV_BUDGET)
    if raw is None or raw == "":
        return DEFAULT_BUDGET
    try:
        val = float(raw)
    except ValueError as exc:
        raise ConfigError(f"{ENV_BUDGET} must be a number, got {raw!r}") from exc
    if val <= 0:
        raise ConfigError(f"{ENV_BUDGET} must be positive")
    return val
