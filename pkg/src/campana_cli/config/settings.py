"""Run configuration.

Values are layered: model defaults, then a YAML file, then the
``CAMPANA_WORK_CAP`` environment variable, then explicit command-line options.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from campana_cli.errors import ConfigError

WORK_CAP_ENV = "CAMPANA_WORK_CAP"

COMMANDS = (
    "validate",
    "lp",
    "alpha",
    "assumption",
    "slice",
    "mfull.count",
    "mfull.constants",
    "mfull.verify",
    "hyperbola.demo",
    "hyperbola.estimate",
    "count",
    "constant",
    "asymptotic",
)


class RunConfig(BaseModel):
    """Everything a command needs besides its input files."""

    model_config = ConfigDict(extra="forbid")

    command: str = "validate"
    fan: Optional[str] = None
    bounds: list[int] = Field(default_factory=lambda: [100])
    prime_cutoff: int = 10**5
    work_cap: int = 10**8
    lattice_cap: int = 2_000_000
    out: Optional[Path] = None
    csv: Optional[Path] = None
    seed: int = 0
    precision_bits: int = 53
    workers: int = 1
    record_timings: bool = False
    options: dict[str, Any] = Field(default_factory=dict)

    @field_validator("command")
    @classmethod
    def _known_command(cls, v: str) -> str:
        if v not in COMMANDS:
            raise ValueError(f"unknown command {v!r}; expected one of {', '.join(COMMANDS)}")
        return v

    @field_validator("bounds")
    @classmethod
    def _positive_bounds(cls, v: list[int]) -> list[int]:
        if any(b <= 0 for b in v):
            raise ValueError("bounds must be positive")
        return v

    @field_validator("work_cap", "lattice_cap", "workers")
    @classmethod
    def _positive_cap(cls, v: int) -> int:
        if v <= 0:
            raise ValueError("must be positive")
        return v

    @field_validator("prime_cutoff")
    @classmethod
    def _cutoff(cls, v: int) -> int:
        if v < 2:
            raise ValueError("prime cutoff must be at least 2")
        return v

    @field_validator("precision_bits")
    @classmethod
    def _precision(cls, v: int) -> int:
        if v < 53:
            raise ValueError("precision must be at least 53 bits")
        return v

    def hashable_dict(self) -> dict[str, Any]:
        """The configuration without output paths, as used by the input hash."""
        return self.model_dump(mode="json", exclude={"out", "csv", "record_timings"})


def read_config_file(path: Union[str, Path]) -> dict[str, Any]:
    """Read a YAML config file. An empty file gives an empty mapping."""
    try:
        with open(path) as f:
            data = yaml.safe_load(f) or {}
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: not valid YAML ({e})") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return data


def load_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[dict[str, Any]] = None,
    env: Optional[dict[str, str]] = None,
) -> RunConfig:
    """
    Build a :class:`RunConfig` from every configuration source.

    Parameters
    ----------
    path : str or Path, optional
        YAML config file.
    overrides : dict, optional
        Explicit command-line values. ``None`` entries are ignored.
    env : dict, optional
        Environment to read ``CAMPANA_WORK_CAP`` from; defaults to ``os.environ``.

    Returns
    -------
    RunConfig

    Raises
    ------
    ConfigError
        If a source is unreadable or a value fails validation.
    """
    data: dict[str, Any] = {}
    if path is not None:
        data.update(read_config_file(path))

    environ = os.environ if env is None else env
    raw_cap = environ.get(WORK_CAP_ENV)
    if raw_cap:
        try:
            data["work_cap"] = int(raw_cap)
        except ValueError as e:
            raise ConfigError(f"{WORK_CAP_ENV} must be an integer, got {raw_cap!r}") from e

    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key == "options":
            data["options"] = {**data.get("options", {}), **value}
        else:
            data[key] = value

    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"invalid configuration: {e}") from e
