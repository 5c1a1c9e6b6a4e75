"""Helpers for exact rationals as they appear in files and reports."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Union

import mpmath

from campana_cli.errors import FanFormatError

RationalLike = Union[int, str, Fraction]


def to_fraction(value: RationalLike) -> Fraction:
    """Parse an integer, a ``Fraction`` or a ``"p/q"`` string."""
    if isinstance(value, bool):
        raise FanFormatError(f"not a rational number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise FanFormatError(f"not a rational number: {value!r}") from e
    raise FanFormatError(f"not a rational number: {value!r}")


def format_fraction(value: Fraction | int) -> str:
    """``"p/q"``, or ``"p"`` when the denominator is 1."""
    q = Fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def fraction_payload(value: Fraction | int) -> dict[str, Any]:
    """Exact string together with a float companion for reports."""
    q = Fraction(value)
    return {"exact": format_fraction(q), "decimal": float(q)}


def lcm_of_denominators(values: tuple[Fraction, ...] | list[Fraction]) -> int:
    from math import lcm

    out = 1
    for v in values:
        out = lcm(out, Fraction(v).denominator)
    return out


def to_mpf(value: Fraction | int | float | mpmath.mpf) -> mpmath.mpf:
    """``mpf`` from an exact rational; ``mpmath.mpf`` rejects ``Fraction`` directly."""
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)
