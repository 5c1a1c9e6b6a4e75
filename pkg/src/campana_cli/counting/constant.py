"""The leading constant of the Campana point count.

``c = 2^(s-r) alpha(L) (sum_sigma prod_{i not in sigma} 1/m_i) prod_i C_{m_i} prod_p lambda_p``
with local factors ``lambda_p = sum_E mu_loc(E) prod_{i in E} euler_factor(m_i, p)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from campana_cli.core._cache import primes_upto
from campana_cli.core.models import OrbifoldInstance
from campana_cli.core.rationals import to_mpf
from campana_cli.counting.moebius import MoebiusLocal, iter_mu_support, local_euler_factor, moebius_local
from campana_cli.errors import NotAmpleError, PreconditionError
from campana_cli.mfull.constants import c_md, constant_C_m
from campana_cli.polytope.toric import alpha_L
from campana_cli.toric.cones import is_ample


@dataclass
class LeadingConstant:
    """``c`` with a relative tail bound and the value of every factor."""

    c: mpmath.mpf
    tail_bound: float
    breakdown: dict[str, object]
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "c": float(self.c),
            "tail_bound": self.tail_bound,
            "breakdown": {
                k: (str(v) if isinstance(v, Fraction) else float(v) if isinstance(v, mpmath.mpf) else v)
                for k, v in self.breakdown.items()
            },
        }


def _require_log_anticanonical(instance: OrbifoldInstance, prime_cutoff: int) -> None:
    if prime_cutoff < 2:
        raise PreconditionError(f"prime cutoff must be at least 2, got {prime_cutoff}")
    if not instance.log_anticanonical:
        raise PreconditionError("the leading constant is defined for the log-anticanonical divisor")
    if not is_ample(instance):
        raise NotAmpleError("the leading constant requires an ample divisor")


def cone_sum(instance: OrbifoldInstance) -> Fraction:
    """``sum_sigma prod_{i not in sigma} 1/m_i``."""
    fan = instance.fan
    total = Fraction(0)
    for sigma in fan.max_cones:
        total += math.prod((Fraction(1, instance.m[i]) for i in fan.complement(sigma)), start=Fraction(1))
    return total


@dataclass
class _EulerProduct:
    value: mpmath.mpf
    relative_tail: float
    warnings: list[str]


def _local_product(ml: MoebiusLocal, m_vec: tuple[int, ...], prime_cutoff: int) -> _EulerProduct:
    log_total = mpmath.mpf(0)
    for p in primes_upto(prime_cutoff):
        log_total += mpmath.log(local_euler_factor(ml, m_vec, p))
    # Singletons have mu_loc = 0, so lambda_p - 1 is a sum of products of at
    # least two local densities, each at most 2/p once p >= 2^m.
    weight = sum(abs(v) * 2 ** len(E) for E, v in ml.table.items() if len(E) >= 2)
    warnings = []
    if prime_cutoff < 2 ** max(m_vec):
        warnings.append(f"prime cutoff {prime_cutoff} is below 2^max(m); tail bound is indicative")
    tail = float(mpmath.expm1(mpmath.mpf(weight) / (prime_cutoff - 1)))
    return _EulerProduct(mpmath.exp(log_total), tail, warnings)


def leading_constant(instance: OrbifoldInstance, prime_cutoff: int = 10**5) -> LeadingConstant:
    """
    The constant ``c`` of ``N(B) ~ c B (log B)^(r-1)``.

    Parameters
    ----------
    instance : OrbifoldInstance
        Instance with the log-anticanonical height.
    prime_cutoff : int
        Largest prime in the Euler products.

    Returns
    -------
    LeadingConstant
        The tail bound combines the truncations of every ``C_{m_i}`` and the
        local product.

    Raises
    ------
    NotAmpleError
        If L is not ample.
    PreconditionError
        If L is not log-anticanonical or the cutoff is below 2.
    """
    _require_log_anticanonical(instance, prime_cutoff)
    fan = instance.fan
    m_vec = tuple(instance.m)
    ml = moebius_local(fan)
    alpha = alpha_L(instance)
    csum = cone_sum(instance)
    C = [constant_C_m(m, prime_cutoff) for m in m_vec]
    prod_C = mpmath.fprod(c.value for c in C)
    euler = _local_product(ml, m_vec, prime_cutoff)
    sign_factor = 2 ** (fan.s - fan.r)
    c = sign_factor * to_mpf(alpha)
    c *= to_mpf(csum) * prod_C * euler.value
    tail = mpmath.fprod(1 + mpmath.mpf(x.relative_tail) for x in C) * (1 + euler.relative_tail) - 1
    breakdown: dict[str, object] = {
        "sign_factor": sign_factor,
        "alpha_L": alpha,
        "cone_sum": csum,
        "prod_C_m": prod_C,
        "euler_product": euler.value,
        "prime_cutoff": prime_cutoff,
    }
    return LeadingConstant(c=c, tail_bound=float(tail), breakdown=breakdown, warnings=euler.warnings)


@dataclass
class TamagawaCheck:
    """``alpha(L) * tau * prod 1/m_i`` compared with ``c``."""

    tau: mpmath.mpf
    c: mpmath.mpf
    reconstructed: mpmath.mpf

    @property
    def relative_difference(self) -> float:
        return float(abs(self.reconstructed - self.c) / self.c)


def tamagawa_factor(instance: OrbifoldInstance, prime_cutoff: int = 10**5) -> TamagawaCheck:
    """``tau = 2^(s-r) sum_sigma prod_{j in sigma} m_j`` times the m-full Euler product."""
    _require_log_anticanonical(instance, prime_cutoff)
    fan = instance.fan
    lc = leading_constant(instance, prime_cutoff)
    archimedean = 2 ** (fan.s - fan.r) * sum(
        math.prod(instance.m[j] for j in sigma) for sigma in fan.max_cones
    )
    tau = archimedean * lc.breakdown["prod_C_m"] * lc.breakdown["euler_product"]  # type: ignore[operator]
    alpha = alpha_L(instance)
    inv_m = mpmath.fprod(mpmath.mpf(1) / m for m in instance.m)
    rebuilt = to_mpf(alpha) * tau * inv_m
    return TamagawaCheck(tau=tau, c=lc.c, reconstructed=rebuilt)


def leading_constant_dsum(
    instance: OrbifoldInstance, d_cap: int, prime_cutoff: int = 10**5
) -> mpmath.mpf:
    """``2^(s-r) alpha(L) cone_sum * sum_{d_i <= d_cap} mu(d) prod_i c_{m_i, d_i}``."""
    _require_log_anticanonical(instance, prime_cutoff)
    fan = instance.fan
    ml = moebius_local(fan)
    densities: dict[tuple[int, int], mpmath.mpf] = {}

    def density(m: int, d: int) -> mpmath.mpf:
        if (m, d) not in densities:
            densities[(m, d)] = c_md(m, d, prime_cutoff).value
        return densities[(m, d)]

    total = mpmath.mpf(0)
    for d_vec, mu in iter_mu_support(ml, [d_cap] * fan.s):
        total += mu * mpmath.fprod(density(m, d) for m, d in zip(instance.m, d_vec))
    alpha = alpha_L(instance)
    csum = cone_sum(instance)
    scale = 2 ** (fan.s - fan.r) * to_mpf(alpha)
    return scale * to_mpf(csum) * total
