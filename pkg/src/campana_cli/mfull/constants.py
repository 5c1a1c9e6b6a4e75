"""Densities of m-full integers.

``F_m(B, d) = c_{m,d} B^(1/m) + O(B^kappa_m)`` with
``c_{m,d} = C_m prod_{p | d} 1/(1 + p - p^((m-1)/m))``. The correction
coefficients ``a_m(mu)`` and their generating function ``G_m`` describe how a
single forced prime changes the count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
from sympy import factorint

from campana_cli.core._cache import primes_upto
from campana_cli.core.rationals import to_mpf
from campana_cli.errors import PreconditionError
from campana_cli.mfull.numbers import count_m_full, require_squarefree


def kappa(m: int) -> Fraction:
    """Error exponent: 0 for ``m = 1``, ``1/(m+1)`` otherwise."""
    return Fraction(0) if m == 1 else Fraction(1, m + 1)


@dataclass
class EulerProduct:
    """A truncated Euler product with a bound on the relative tail."""

    value: mpmath.mpf
    relative_tail: float
    cutoff: int


@lru_cache(maxsize=64)
def constant_C_m(m: int, prime_cutoff: int) -> EulerProduct:
    """
    ``C_m = prod_p (1 + sum_{j=m+1}^{2m-1} p^(-j/m))`` over primes ``p <= prime_cutoff``.

    The relative tail is bounded by ``exp((m-1) m X^(-1/m)) - 1`` with ``X`` the cutoff.
    """
    if m < 1:
        raise PreconditionError(f"m must be positive, got {m}")
    if prime_cutoff < 2:
        raise PreconditionError("prime cutoff must be at least 2")
    if m == 1:
        return EulerProduct(mpmath.mpf(1), 0.0, prime_cutoff)
    log_total = mpmath.mpf(0)
    for p in primes_upto(prime_cutoff):
        term = mpmath.fsum(mpmath.power(p, -mpmath.mpf(j) / m) for j in range(m + 1, 2 * m))
        log_total += mpmath.log1p(term)
    tail = float(mpmath.expm1((m - 1) * m * mpmath.power(prime_cutoff, -mpmath.mpf(1) / m)))
    return EulerProduct(mpmath.exp(log_total), tail, prime_cutoff)


def zeta_quotient_C2() -> mpmath.mpf:
    """``zeta(3/2) / zeta(3)``, the closed form of ``C_2``."""
    return mpmath.zeta(mpmath.mpf(3) / 2) / mpmath.zeta(3)


@lru_cache(maxsize=256)
def rho(m: int, k: int, r: int) -> int:
    """Number of ``(k_1, ..., k_r)`` with ``1 <= k_i <= m-1`` summing to ``k``."""
    if r == 0:
        return int(k == 0)
    if k < r or k > r * (m - 1):
        return 0
    return sum(rho(m, k - part, r - 1) for part in range(1, m))


def correction_terms(m: int, mu_max: int) -> dict[int, int]:
    """Net coefficient of ``F_m(B p^-mu)`` for ``m < mu <= mu_max`` in the forced-prime identity.

    Four families of terms contribute: ``rho(k, 2r)`` at ``(2r+1)m + k`` and
    ``rho(k, 2r-1)`` at ``(2r-1)m + k`` with sign +1, ``rho(k, 2r-1)`` and
    ``rho(k, 2r)`` at ``2rm + k`` with sign -1.
    """
    if m < 2:
        raise PreconditionError("correction terms need m >= 2")
    out: dict[int, int] = {mu: 0 for mu in range(m + 1, mu_max + 1)}

    def add(mu: int, value: int) -> None:
        if m < mu <= mu_max and value:
            out[mu] += value

    r = 1
    while (2 * r - 1) * m + (2 * r - 1) <= mu_max:
        odd, even = 2 * r - 1, 2 * r
        for k in range(odd, odd * (m - 1) + 1):
            add(odd * m + k, rho(m, k, odd))
            add(even * m + k, -rho(m, k, odd))
        for k in range(even, even * (m - 1) + 1):
            add((even + 1) * m + k, rho(m, k, even))
            add(even * m + k, -rho(m, k, even))
        r += 1
    return out


def a_m_coefficients(m: int, mu_max: int) -> list[int]:
    """``a_m(mu)`` for ``mu = m+1 .. mu_max``."""
    terms = correction_terms(m, mu_max)
    return [terms[mu] for mu in range(m + 1, mu_max + 1)]


def G_m_series(m: int, mu_max: int) -> list[int]:
    """Taylor coefficients of ``-x^(m+1) (x^(m-1) - 1) / (x^m - x + 1)`` up to ``x^mu_max``.

    Computed by exact power series division; entry ``mu`` is the coefficient of ``x^mu``.
    """
    num = [Fraction(0)] * (mu_max + 1)
    if m + 1 <= mu_max:
        num[m + 1] += 1
    if 2 * m <= mu_max:
        num[2 * m] -= 1
    den = [Fraction(0)] * (mu_max + 1)
    den[0] += 1
    if 1 <= mu_max:
        den[1] -= 1
    if m <= mu_max:
        den[m] += 1
    quot = [Fraction(0)] * (mu_max + 1)
    for n in range(mu_max + 1):
        acc = num[n] - sum((den[j] * quot[n - j] for j in range(1, n + 1)), Fraction(0))
        quot[n] = acc / den[0]
    return [int(q) for q in quot]


def G_m_eval(m: int, x: Fraction | float | mpmath.mpf) -> mpmath.mpf:
    """Closed form of the generating function ``G_m`` on ``(0, 1)``; ``G_1 = 0``."""
    if m == 1:
        return mpmath.mpf(0)
    xx = to_mpf(x)
    if not 0 < xx < 1:
        raise PreconditionError("G_m is evaluated on (0, 1)")
    return -(xx ** (m + 1)) * (xx ** (m - 1) - 1) / (xx**m - xx + 1)


def euler_factor(m: int, p: int) -> mpmath.mpf:
    """Local density ``1 / (1 + p - p^((m-1)/m))`` of m-full integers divisible by ``p``."""
    return 1 / (1 + p - mpmath.power(p, mpmath.mpf(m - 1) / m))


@dataclass
class Density:
    """``c_{m,d}`` with the warnings raised while computing it."""

    value: mpmath.mpf
    relative_tail: float
    warnings: list[str] = field(default_factory=list)


def c_md(m: int, d: int, prime_cutoff: int) -> Density:
    """``c_{m,d} = C_m prod_{p | d} euler_factor(m, p)``.

    Each local factor is at most ``p^(-1/m)``; a value above ``C_m d^(-1/m)``
    is recorded as a warning only.
    """
    require_squarefree(d)
    base = constant_C_m(m, prime_cutoff)
    value = base.value
    for p in (factorint(d) if d > 1 else {}):
        value *= euler_factor(m, p)
    warnings: list[str] = []
    if d > 1 and value > base.value * mpmath.power(d, -mpmath.mpf(1) / m) * (1 + 1e-12):
        warnings.append(f"c_(m={m},d={d}) exceeds the decay bound C_m d^(-1/m)")
    return Density(value, base.relative_tail, warnings)


def constant_K_m(m: int, mu_max: int = 60) -> mpmath.mpf:
    """Truncation of ``1 + sum_mu |a_m(mu)| 2^(-kappa_m (mu - m))``; a numerical bound only."""
    if m == 1:
        return mpmath.mpf(1)
    k = to_mpf(kappa(m))
    coeffs = a_m_coefficients(m, mu_max)
    return 1 + mpmath.fsum(
        abs(a) * mpmath.power(2, -k * (mu - m)) for mu, a in zip(range(m + 1, mu_max + 1), coeffs)
    )


@dataclass
class MFullConstants:
    m: int
    C_m: mpmath.mpf
    C_m_tail: float
    kappa_m: Fraction
    K_m_bound: mpmath.mpf
    a_coeffs: list[int]
    cutoff: int


def m_full_constants(m: int, prime_cutoff: int, mu_max: int = 30) -> MFullConstants:
    C = constant_C_m(m, prime_cutoff)
    return MFullConstants(
        m=m,
        C_m=C.value,
        C_m_tail=C.relative_tail,
        kappa_m=kappa(m),
        K_m_bound=constant_K_m(m),
        a_coeffs=a_m_coefficients(m, mu_max) if m >= 2 else [],
        cutoff=prime_cutoff,
    )


def normalised_error(m: int, d: int, bound: int, prime_cutoff: int) -> float:
    """``|F_m(B, d) - c_{m,d} B^(1/m)| / B^kappa_m``."""
    exact = count_m_full(m, bound, d)
    main = c_md(m, d, prime_cutoff).value * mpmath.power(bound, mpmath.mpf(1) / m)
    return float(abs(exact - main) / mpmath.power(bound, to_mpf(kappa(m))))
