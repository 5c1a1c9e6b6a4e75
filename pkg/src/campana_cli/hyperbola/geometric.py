"""Weighted geometric sums ``g_l(M, theta) = sum_{0 <= m <= M} m^l theta^m``.

Rational ``theta`` (``int`` or ``Fraction``) is evaluated exactly; floats use
compensated summation. ``0^0`` is read as 1 throughout.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

from campana_cli.errors import PreconditionError

Number = Union[int, Fraction, float]


def _is_exact(theta: Number) -> bool:
    return isinstance(theta, (int, Fraction))


def geometric_sum_g(l: int, M: int, theta: Number) -> Number:  # noqa: E741
    """
    ``sum_{m=0}^{M} m^l theta^m``.

    Parameters
    ----------
    l : int
        Power of ``m``, at least 0.
    M : int
        Upper summation limit, at least 0.
    theta : int, Fraction or float
        Positive ratio.

    Returns
    -------
    Fraction or float
        Exact for rational ``theta``.
    """
    if l < 0 or M < 0:
        raise PreconditionError(f"l and M must be non-negative, got l={l}, M={M}")
    if theta <= 0:
        raise PreconditionError(f"theta must be positive, got {theta}")
    if _is_exact(theta):
        q = Fraction(theta)
        return sum((Fraction(m**l) * q**m for m in range(M + 1)), Fraction(0))
    return math.fsum(float(m**l) * theta**m for m in range(M + 1))


def _closed_form(l: int, M: int, theta: Number) -> Number:  # noqa: E741
    """Right-hand side of the two-sum closed form of ``(theta - 1)^(l+1) g_l(M)``."""
    n = l + 1
    head = []
    for m in range(n):
        inner = sum(math.comb(n, h) * (-1) ** (n - h) * (m - h) ** l for h in range(m + 1))
        head.append(inner * theta**m)
    tail = []
    for m in range(1, n + 1):
        inner = 0
        for h in range(m, n + 1):
            poly = sum(math.comb(l, k) * M**k * (m - h) ** (l - k) for k in range(l + 1))
            inner += math.comb(n, h) * (-1) ** (n - h) * poly
        tail.append(inner * theta**m)
    if _is_exact(theta):
        q = Fraction(theta)
        return sum(head, Fraction(0)) + q**M * sum(tail, Fraction(0))
    return math.fsum(head) + theta**M * math.fsum(tail)


def verify_geometric_sum_closed_form(l: int, M: int, theta: Number) -> Number:  # noqa: E741
    """Residual of the closed form for ``(theta - 1)^(l+1) g_l(M, theta)``.

    Requires ``M > l >= 0`` and ``theta != 1``. The residual is exactly 0 for
    rational ``theta``; for floats it is relative to ``max(1, |lhs|)``.
    """
    if not M > l >= 0:
        raise PreconditionError(f"closed form needs M > l >= 0, got l={l}, M={M}")
    if theta == 1:
        raise PreconditionError("closed form needs theta != 1")
    g = geometric_sum_g(l, M, theta)
    if _is_exact(theta):
        lhs = (Fraction(theta) - 1) ** (l + 1) * g
        return abs(lhs - _closed_form(l, M, theta))
    lhs_f = (theta - 1) ** (l + 1) * g
    return abs(lhs_f - _closed_form(l, M, theta)) / max(1.0, abs(lhs_f))


def verify_binomial_identity(l: int, alpha: int) -> int:  # noqa: E741
    """``sum_{h=0}^{l+1} C(l+1, h) (-1)^(l+1-h) h^alpha``, which vanishes for ``0 <= alpha <= l``."""
    if not 0 <= alpha <= l:
        raise PreconditionError(f"need 0 <= alpha <= l, got alpha={alpha}, l={l}")
    n = l + 1
    return sum(math.comb(n, h) * (-1) ** (n - h) * h**alpha for h in range(n + 1))


def geometric_sum_limit_ratio(l: int, M: int, theta: Number) -> float:  # noqa: E741
    """``(theta - 1)^(l+1) g_l(M, theta) / ((-1)^(l+1) l!)``.

    Tends to 1 as ``theta -> 1-`` once ``M`` is large compared with ``1/(1 - theta)``.
    """
    g = geometric_sum_g(l, M, theta)
    value = (theta - 1) ** (l + 1) * g / ((-1) ** (l + 1) * math.factorial(l))
    return float(value)
