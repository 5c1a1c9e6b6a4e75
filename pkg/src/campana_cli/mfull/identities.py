"""Exact checks of the forced-prime inclusion-exclusion identities.

``F_m(B, p) = F_m(B p^-m) + sum_{mu > m} a_m(mu) F_m(B p^-mu)`` and the same
with an extra squarefree divisor ``d'`` coprime to ``p`` on both sides. All
sums are finite since ``F_m(x) = 0`` for ``x < 1``.
"""

from __future__ import annotations

from collections.abc import Sequence

from campana_cli.errors import PreconditionError
from campana_cli.mfull.constants import correction_terms
from campana_cli.mfull.numbers import count_m_full, require_squarefree


def _max_exponent(bound: int, p: int) -> int:
    K = 0
    while p ** (K + 1) <= bound:
        K += 1
    return K


def _rhs(m: int, p: int, bound: int, d: int) -> int:
    K_max = _max_exponent(bound, p)
    total = count_m_full(m, bound // p**m, d) if m <= K_max else 0
    for mu, coeff in correction_terms(m, max(K_max, m + 1)).items():
        if coeff and mu <= K_max:
            total += coeff * count_m_full(m, bound // p**mu, d)
    return total


def verify_forced_prime_identity(m: int, p: int, bound: int) -> bool:
    """``F_m(B, p)`` equals its expansion in ``F_m(B p^-mu)``."""
    if m < 2:
        raise PreconditionError("the forced-prime identity needs m >= 2")
    return count_m_full(m, bound, p) == _rhs(m, p, bound, 1)


def verify_forced_prime_identity_with_divisor(m: int, d: int, p: int, bound: int) -> bool:
    """``F_m(B, d)`` equals its expansion in ``F_m(B p^-mu, d/p)`` for ``p | d``."""
    if m < 2:
        raise PreconditionError("the forced-prime identity needs m >= 2")
    require_squarefree(d)
    if d % p:
        raise PreconditionError(f"{p} does not divide {d}")
    return count_m_full(m, bound, d) == _rhs(m, p, bound, d // p)


def box_sum_f(m_vec: Sequence[int], d_vec: Sequence[int], bounds: Sequence[int]) -> int:
    """``prod_i F_{m_i}(B_i, d_i)``."""
    if not len(m_vec) == len(d_vec) == len(bounds):
        raise PreconditionError("m, d and bound vectors differ in length")
    out = 1
    for m, d, b in zip(m_vec, d_vec, bounds):
        out *= count_m_full(m, int(b), d)
        if out == 0:
            return 0
    return out
