"""Arithmetic functions with a product-shaped box asymptotic.

A function ``f`` on ``N^s`` qualifies when its sums over boxes
``y_i <= B_i`` behave like ``C_M prod_i B_i^varpi_i`` up to an error governed by
``C_E`` and ``Delta``, and its restrictions to fixed coordinates ``y_I`` have
constants ``restricted_constant(I, y_I)`` bounded by ``C_E |y_I|^D``.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Sequence
from fractions import Fraction

import mpmath
from sympy import factorint

from campana_cli.core._cache import m_full_stream
from campana_cli.core.rationals import to_mpf
from campana_cli.errors import FanFormatError, PreconditionError
from campana_cli.mfull.constants import c_md, constant_C_m, euler_factor
from campana_cli.mfull.identities import box_sum_f
from campana_cli.mfull.numbers import count_m_full, is_m_full, require_squarefree

# Exponent slack in the divisor decay of the error constant
EPSILON = Fraction(1, 12)


class PropertyIFunction(ABC):
    """Interface consumed by the hyperbola engine."""

    arity: int
    varpi: tuple[Fraction, ...]
    C_M: mpmath.mpf
    C_E: mpmath.mpf
    Delta: Fraction
    D: Fraction
    nu: Fraction

    #: Whether ``f`` is a product of per-coordinate 0/1 indicators
    separable: bool = False

    @property
    def name(self) -> str:
        return type(self).__name__

    @abstractmethod
    def eval(self, y: Sequence[int]) -> int:
        """Value of ``f`` at a positive integer vector."""

    @abstractmethod
    def box_sum(self, bounds: Sequence[int]) -> int:
        """``sum_{1 <= y_i <= B_i} f(y)``."""

    @abstractmethod
    def restricted_constant(self, I: Sequence[int], y_I: Sequence[int]) -> mpmath.mpf:  # noqa: E741
        """Leading constant of ``f`` with the coordinates in ``I`` fixed to ``y_I``."""

    def support(self, i: int, bound: int) -> tuple[int, ...]:
        """Sorted ``y <= bound`` on which the ``i``-th indicator is 1."""
        raise PreconditionError(f"{self.name} is not separable")

    def count_upto(self, i: int, bound: int) -> int:
        """Number of ``y <= bound`` on which the ``i``-th indicator is 1."""
        raise PreconditionError(f"{self.name} is not separable")

    def describe(self) -> dict:
        return {
            "name": self.name,
            "arity": self.arity,
            "varpi": [str(v) for v in self.varpi],
            "C_M": float(self.C_M),
            "C_E": float(self.C_E),
            "Delta": str(self.Delta),
            "D": str(self.D),
            "nu": str(self.nu),
        }


class MFullFunction(PropertyIFunction):
    """Indicator of ``y`` with ``y_i`` m_i-full and divisible by ``d_i``.

    Parameters
    ----------
    m_vec : sequence of int
        Fullness exponents, each at least 1.
    d_vec : sequence of int, optional
        Squarefree moduli, defaulting to 1.
    prime_cutoff : int
        Cutoff for the Euler products in the densities.
    """

    separable = True

    def __init__(
        self,
        m_vec: Sequence[int],
        d_vec: Sequence[int] | None = None,
        prime_cutoff: int = 10**5,
    ) -> None:
        m = tuple(int(v) for v in m_vec)
        d = tuple(int(v) for v in d_vec) if d_vec is not None else (1,) * len(m)
        if not m:
            raise PreconditionError("an m-full function needs at least one coordinate")
        if len(d) != len(m):
            raise PreconditionError("m and d vectors differ in length")
        if any(v < 1 for v in m):
            raise PreconditionError(f"fullness exponents must be positive, got {m}")
        for v in d:
            require_squarefree(v)
        self.m = m
        self.d = d
        self.prime_cutoff = prime_cutoff
        self.arity = len(m)
        self.varpi = tuple(Fraction(1, v) for v in m)
        self.Delta = min([Fraction(1, 3)] + [Fraction(1, v * (v + 1)) for v in m])
        self.D = Fraction(2 * self.arity, 3)
        self.nu = Fraction(1, self.arity)
        self._densities = [c_md(mi, di, prime_cutoff).value for mi, di in zip(m, d)]
        self.C_M = mpmath.fprod(self._densities)
        self.C_E = self._error_constant()

    @property
    def name(self) -> str:
        return "mfull:" + ",".join(map(str, self.m)) + ":" + ",".join(map(str, self.d))

    def _error_constant(self) -> mpmath.mpf:
        decay = -mpmath.mpf(2) / 3 + to_mpf(EPSILON)
        out = mpmath.mpf(1)
        for mi, di in zip(self.m, self.d):
            out *= max(mpmath.mpf(1), constant_C_m(mi, self.prime_cutoff).value)
            for p in (factorint(di) if di > 1 else {}):
                out *= max(euler_factor(mi, p), mpmath.power(p, decay))
        return out

    def eval(self, y: Sequence[int]) -> int:
        if len(y) != self.arity:
            raise PreconditionError(f"expected {self.arity} coordinates, got {len(y)}")
        return int(
            all(v >= 1 and v % di == 0 and is_m_full(v, mi) for v, mi, di in zip(y, self.m, self.d))
        )

    def box_sum(self, bounds: Sequence[int]) -> int:
        return box_sum_f(self.m, self.d, [int(b) for b in bounds])

    def restricted_constant(self, I: Sequence[int], y_I: Sequence[int]) -> mpmath.mpf:  # noqa: E741
        if len(I) != len(y_I):
            raise PreconditionError("I and y_I differ in length")
        for i, v in zip(I, y_I):
            if not (v >= 1 and v % self.d[i] == 0 and is_m_full(v, self.m[i])):
                return mpmath.mpf(0)
        fixed = set(I)
        return mpmath.fprod(c for j, c in enumerate(self._densities) if j not in fixed)

    def support(self, i: int, bound: int) -> tuple[int, ...]:
        if bound < 1:
            return ()
        return m_full_stream(int(bound), self.m[i], self.d[i])

    def count_upto(self, i: int, bound: int) -> int:
        return count_m_full(self.m[i], int(bound), self.d[i])


class UnitFunction(MFullFunction):
    """``f = 1`` on ``N^s``."""

    def __init__(self, arity: int) -> None:
        if arity < 1:
            raise PreconditionError("arity must be positive")
        super().__init__((1,) * arity, (1,) * arity, prime_cutoff=2)

    @property
    def name(self) -> str:
        return "unit"

    def support(self, i: int, bound: int) -> tuple[int, ...]:
        return tuple(range(1, int(bound) + 1))

    def count_upto(self, i: int, bound: int) -> int:
        return max(0, int(bound))


def parse_preset(preset: str, arity: int, prime_cutoff: int = 10**5) -> PropertyIFunction:
    """Build a function from ``"unit"`` or ``"mfull:m1,...,ms:d1,...,ds"``.

    The divisor part may be omitted, and a single ``m`` is broadcast to all
    ``arity`` coordinates.
    """
    text = preset.strip().lower()
    if text == "unit":
        return UnitFunction(arity)
    parts = text.split(":")
    if parts[0] != "mfull" or len(parts) not in (2, 3):
        raise FanFormatError(f"unknown function preset '{preset}'")
    try:
        m = [int(v) for v in parts[1].split(",")]
        d = [int(v) for v in parts[2].split(",")] if len(parts) == 3 else [1] * len(m)
    except ValueError as e:
        raise FanFormatError(f"cannot parse preset '{preset}': {e}") from e
    if len(m) == 1:
        m = m * arity
    if len(d) == 1:
        d = d * arity
    if len(m) != arity or len(d) != arity:
        raise FanFormatError(f"preset '{preset}' does not have {arity} coordinates")
    return MFullFunction(m, d, prime_cutoff)
