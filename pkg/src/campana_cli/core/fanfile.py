"""Fan file parsing.

Fan files are JSON documents::

    {"name": "p2", "dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]],
     "max_cones": [[1, 2], [2, 3], [3, 1]], "m": [1, 1, 1], "L": null}

Cone labels are 1-indexed. ``L`` is optional; ``null`` selects the
log-anticanonical divisor. Its entries may be integers or ``"p/q"`` strings.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from campana_cli.core.models import Fan, OrbifoldInstance
from campana_cli.core.rationals import to_fraction
from campana_cli.data import get_data_path, list_bundled_fans
from campana_cli.errors import FanFormatError


class FanFile(BaseModel):
    """Schema of a fan file."""

    model_config = ConfigDict(extra="forbid")

    name: str = ""
    dim: int = Field(ge=1)
    rays: list[list[int]]
    max_cones: list[list[int]]
    m: Optional[list[int]] = None
    L: Optional[list[Union[int, str]]] = None

    @model_validator(mode="after")
    def _check_shape(self) -> FanFile:
        s = len(self.rays)
        for k, ray in enumerate(self.rays, start=1):
            if len(ray) != self.dim:
                raise ValueError(f"ray {k} has {len(ray)} coordinates, expected {self.dim}")
        if not self.max_cones:
            raise ValueError("no maximal cones given")
        for cone in self.max_cones:
            if len(cone) != self.dim:
                raise ValueError(f"cone {cone} must have exactly {self.dim} rays")
            if len(set(cone)) != len(cone):
                raise ValueError(f"cone {cone} repeats a ray")
            if any(not 1 <= i <= s for i in cone):
                raise ValueError(f"cone {cone} uses a label outside 1..{s}")
        if len({tuple(sorted(c)) for c in self.max_cones}) != len(self.max_cones):
            raise ValueError("duplicate maximal cone")
        if self.m is not None and len(self.m) != s:
            raise ValueError(f"m has {len(self.m)} entries, expected {s}")
        if self.L is not None and len(self.L) != s:
            raise ValueError(f"L has {len(self.L)} entries, expected {s}")
        return self

    def to_fan(self) -> Fan:
        return Fan(
            dim=self.dim,
            rays=tuple(tuple(v) for v in self.rays),
            max_cones=tuple(tuple(i - 1 for i in c) for c in self.max_cones),
            name=self.name,
        )


def resolve_fan_path(source: Union[str, Path]) -> Path:
    """Return the path of a fan file, falling back to bundled fans by name."""
    path = Path(source)
    if path.exists():
        return path
    bundled = get_data_path(f"{source}.json")
    if bundled.exists():
        return bundled
    known = ", ".join(list_bundled_fans())
    raise FanFormatError(f"fan file not found: {source} (bundled fans: {known})")


def parse_fan_file(data: dict) -> FanFile:
    try:
        return FanFile.model_validate(data)
    except ValidationError as e:
        raise FanFormatError(f"invalid fan file: {e}") from e


def load_instance(
    source: Union[str, Path],
    m: Optional[list[int]] = None,
    L: Optional[list[Union[int, str]]] = None,
) -> OrbifoldInstance:
    """
    Load an orbifold instance from a fan file or a bundled fan name.

    Parameters
    ----------
    source : str or Path
        Path to a fan JSON file, or the name of a bundled fan (``p2``).
    m : list of int, optional
        Orbifold weights overriding the file's ``m``. A single value is
        broadcast to every ray.
    L : list, optional
        Coefficients of L overriding the file's ``L``.

    Returns
    -------
    OrbifoldInstance
        Parsed (not yet validated) instance.
    """
    path = resolve_fan_path(source)
    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise FanFormatError(f"{path}: not valid JSON ({e})") from e

    parsed = parse_fan_file(data)
    fan = parsed.to_fan()
    if not fan.name:
        fan = Fan(fan.dim, fan.rays, fan.max_cones, name=path.stem)

    weights = m if m is not None else parsed.m
    if weights is None:
        weights = [1] * fan.s
    elif len(weights) == 1 and fan.s > 1:
        weights = list(weights) * fan.s

    coeffs = L if L is not None else parsed.L
    L_tuple = None if coeffs is None else tuple(to_fraction(c) for c in coeffs)
    return OrbifoldInstance(fan=fan, m=tuple(int(w) for w in weights), L=L_tuple)
