"""Data models for campana-cli."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from campana_cli.core.rationals import format_fraction


@dataclass(frozen=True)
class Fan:
    """A simplicial fan given by its rays and maximal cones.

    Ray labels are 0-indexed internally; fan files use 1-indexed labels.
    """

    dim: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self) -> None:
        # Sorted cone labels make cone identity independent of file order.
        cones = tuple(tuple(sorted(c)) for c in self.max_cones)
        object.__setattr__(self, "max_cones", cones)

    @property
    def n(self) -> int:
        return self.dim

    @property
    def s(self) -> int:
        """Number of rays (torus-invariant prime divisors)."""
        return len(self.rays)

    @property
    def r(self) -> int:
        """Picard rank of a smooth complete toric variety with this fan."""
        return self.s - self.dim

    def complement(self, sigma: tuple[int, ...]) -> tuple[int, ...]:
        """Labels of rays not in ``sigma``."""
        members = set(sigma)
        return tuple(i for i in range(self.s) if i not in members)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "dim": self.dim,
            "rays": [list(v) for v in self.rays],
            "max_cones": [[i + 1 for i in c] for c in self.max_cones],
        }


@dataclass(frozen=True)
class OrbifoldInstance:
    """A fan together with orbifold weights ``m`` and the divisor ``L``.

    ``L`` is given by its coefficients on the rays. When omitted it defaults
    to the log-anticanonical divisor with coefficients ``1/m_i``.
    """

    fan: Fan
    m: tuple[int, ...]
    L: Optional[tuple[Fraction, ...]] = None

    def __post_init__(self) -> None:
        from campana_cli.errors import FanFormatError

        if len(self.m) != self.fan.s:
            raise FanFormatError(f"expected {self.fan.s} orbifold weights, got {len(self.m)}")
        if any(mi < 1 for mi in self.m):
            raise FanFormatError(f"orbifold weights must be positive integers, got {self.m}")
        if self.L is None:
            object.__setattr__(self, "L", self.varpi)
        elif len(self.L) != self.fan.s:
            raise FanFormatError(f"expected {self.fan.s} coefficients for L, got {len(self.L)}")
        else:
            object.__setattr__(self, "L", tuple(Fraction(c) for c in self.L))

    @property
    def varpi(self) -> tuple[Fraction, ...]:
        """The log-anticanonical coefficients ``1/m_i``."""
        return tuple(Fraction(1, mi) for mi in self.m)

    @property
    def log_anticanonical(self) -> bool:
        return self.L == self.varpi

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        assert self.L is not None
        return self.L

    def to_dict(self) -> dict[str, Any]:
        data = self.fan.to_dict()
        data["m"] = list(self.m)
        data["L"] = None if self.log_anticanonical else [format_fraction(c) for c in self.coeffs]
        return data

    def fingerprint(self) -> str:
        """SHA-256 of the canonical JSON form of the instance."""
        payload = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class ConeData:
    """Per-cone data of an orbifold instance.

    ``dual_basis[k]`` is the dual vector ``u_j`` for ``j = sigma[k]``.
    ``beta[i][j]`` and ``alpha[i]`` are indexed by ray labels.
    """

    sigma: tuple[int, ...]
    complement: tuple[int, ...]
    dual_basis: tuple[tuple[int, ...], ...]
    beta: tuple[tuple[int, ...], ...]
    alpha: tuple[Fraction, ...]
    u_L: tuple[Fraction, ...]

    def beta_on(self, i: int) -> dict[int, int]:
        """Nonzero-allowed entries ``beta[i][j]`` for ``j`` in the cone."""
        return {j: self.beta[i][j] for j in self.sigma}


@dataclass
class FanValidationReport:
    """Result of fan validation."""

    valid: bool = True
    primitive: bool = True
    smooth: bool = True
    complete: bool = True
    n: int = 0
    s: int = 0
    r: int = 0
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    cones_checked: int = 0
