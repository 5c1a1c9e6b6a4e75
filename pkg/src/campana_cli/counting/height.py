"""Exact heights on the torsor.

``H(y) = max_sigma prod_i |y_i|^alpha_{i,sigma}``. With ``t`` the least common
denominator of all exponents, ``H(y)^t`` is an integer and comparisons with
``B`` are made as ``H(y)^t <= B^t``.
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction
from typing import Union

from campana_cli.core.models import OrbifoldInstance
from campana_cli.core.rationals import lcm_of_denominators
from campana_cli.errors import PreconditionError, ZeroCoordinateError
from campana_cli.toric.cones import all_cone_data

Bound = Union[int, Fraction, float]


def _require_nonzero(y: Sequence[int]) -> None:
    for i, v in enumerate(y):
        if v == 0:
            raise ZeroCoordinateError(f"coordinate {i + 1} is zero")


def bound_power(bound: Bound, t: int) -> Union[int, Fraction]:
    """``B^t`` exactly; floats are read as the rational they represent."""
    if isinstance(bound, int):
        return bound**t
    q = Fraction(bound)
    if q.denominator == 1:
        return q.numerator**t
    return q**t


class HeightEvaluator:
    """Integral exponent table ``t * alpha_{i,sigma}`` of an instance."""

    def __init__(self, instance: OrbifoldInstance) -> None:
        self.instance = instance
        data = all_cone_data(instance)
        alphas = [cd.alpha for cd in data]
        if any(v < 0 for row in alphas for v in row):
            raise PreconditionError("heights need non-negative coefficients in every L(sigma)")
        self.t = lcm_of_denominators([v for row in alphas for v in row])
        self.cones = tuple(cd.sigma for cd in data)
        self.table: tuple[tuple[int, ...], ...] = tuple(
            tuple(int(v * self.t) for v in row) for row in alphas
        )

    @property
    def s(self) -> int:
        return self.instance.fan.s

    def height_power(self, y: Sequence[int]) -> int:
        """``H(y)^t``."""
        if len(y) != self.s:
            raise PreconditionError(f"expected {self.s} coordinates, got {len(y)}")
        _require_nonzero(y)
        best = 0
        for row in self.table:
            value = 1
            for v, e in zip(y, row):
                value *= abs(v) ** e
            best = max(best, value)
        return best

    def within(self, y: Sequence[int], bound: Bound) -> bool:
        """``H(y) <= B``, compared exactly."""
        return self.height_power(y) <= bound_power(bound, self.t)

    def search_bounds(self, bound: Bound) -> tuple[int, ...]:
        """Largest ``|y_i|`` compatible with ``H(y) <= B``, minimised over cones with positive exponent."""
        from sympy import integer_nthroot

        limit = int(bound_power(bound, self.t))
        out = []
        for i in range(self.s):
            caps = [integer_nthroot(limit, row[i])[0] for row in self.table if row[i] > 0]
            if not caps:
                raise PreconditionError(f"ray {i + 1} has no positive height exponent; no Northcott bound")
            out.append(min(caps))
        return tuple(out)


def height(instance: OrbifoldInstance, y: Sequence[int]) -> tuple[int, int]:
    """``(H(y)^t, t)`` as exact integers.

    Raises
    ------
    ZeroCoordinateError
        If some ``y_i`` is zero.
    """
    ev = HeightEvaluator(instance)
    return ev.height_power(y), ev.t
