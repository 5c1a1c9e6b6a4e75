"""Polytopes attached to an orbifold instance and the constants they determine."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from campana_cli.core.models import OrbifoldInstance
from campana_cli.errors import (
    InconsistentResultError,
    NotAmpleError,
    PreconditionError,
    UnboundedPolytopeError,
)
from campana_cli.polytope.rational import RationalPolytope, Row
from campana_cli.polytope.simplex import LPSolution, lp_maximize
from campana_cli.polytope.volume import slice_volume
from campana_cli.toric.cones import all_cone_data, check_assumption_L, cone_data, is_ample


def _unit(s: int, i: int, value: int = 1) -> tuple[Fraction, ...]:
    return tuple(Fraction(value * int(i == j)) for j in range(s))


def build_tilde_P(instance: OrbifoldInstance) -> RationalPolytope:
    """``{t >= 0 : sum_i alpha_{i,sigma} t_i <= 1 for every maximal cone sigma}``.

    Raises
    ------
    UnboundedPolytopeError
        If some ray has ``alpha_{i,sigma} <= 0`` for every cone.
    """
    if not check_assumption_L(instance):
        raise UnboundedPolytopeError("L has no positive coefficient on some ray in every cone")
    s = instance.fan.s
    rows: list[Row] = list(RationalPolytope.nonnegative_orthant(s))
    rows += [(cd.alpha, Fraction(1)) for cd in all_cone_data(instance)]
    return RationalPolytope(s, rows)


def build_tilde_P_sigma(instance: OrbifoldInstance, sigma: tuple[int, ...]) -> RationalPolytope:
    """The part of ``P~`` attached to one cone.

    ``t >= 0``, ``t_j <= sum_{i not in sigma} beta_{sigma,i,j} t_i`` for ``j`` in
    ``sigma`` and ``sum_i alpha_{i,sigma} t_i <= 1``.
    """
    s = instance.fan.s
    cd = cone_data(instance, sigma)
    rows: list[Row] = list(RationalPolytope.nonnegative_orthant(s))
    for j in sigma:
        a = [Fraction(0)] * s
        a[j] = Fraction(1)
        for i in cd.complement:
            a[i] -= cd.beta[i][j]
        rows.append((tuple(a), Fraction(0)))
    rows.append((cd.alpha, Fraction(1)))
    return RationalPolytope(s, rows)


@dataclass
class ExponentReport:
    """The exponents ``a`` and ``b = k + 1`` of the predicted asymptotic."""

    a: Fraction
    b: int
    k: int
    lp: LPSolution


def exponents_a_b(instance: OrbifoldInstance) -> ExponentReport:
    """
    Maximise ``sum_i t_i / m_i`` over ``P~``.

    Returns
    -------
    ExponentReport
        ``a`` is the optimum and ``k`` the dimension of the optimal face.

    Raises
    ------
    NotAmpleError
        If L is not ample.
    InconsistentResultError
        If L is log-anticanonical and ``(a, b) != (1, r)``.
    """
    if not is_ample(instance):
        raise NotAmpleError("exponents require an ample L")
    P = build_tilde_P(instance)
    sol = lp_maximize(P, instance.varpi)
    report = ExponentReport(a=sol.optimum, b=sol.optimal_face_dim + 1, k=sol.optimal_face_dim, lp=sol)
    if instance.log_anticanonical and (report.a != 1 or report.b != instance.fan.r):
        raise InconsistentResultError(
            f"log-anticanonical instance gave a={report.a}, b={report.b}; "
            f"expected a=1, b={instance.fan.r}"
        )
    return report


@dataclass
class DualExponent:
    a: Fraction
    multipliers: dict[tuple[int, ...], Fraction] = field(default_factory=dict)


def dual_exponent_a(instance: OrbifoldInstance, check: bool = True) -> DualExponent:
    """Minimise ``sum lambda_sigma`` subject to ``sum_sigma lambda_sigma alpha_{i,sigma} >= 1/m_i``.

    With ``check`` the optimum is compared with the primal exponent ``a``.
    """
    data = all_cone_data(instance)
    s = instance.fan.s
    ncones = len(data)
    rows: list[Row] = list(RationalPolytope.nonnegative_orthant(ncones))
    for i in range(s):
        a = tuple(-cd.alpha[i] for cd in data)
        rows.append((a, -instance.varpi[i]))
    P = RationalPolytope(ncones, rows)
    sol = lp_maximize(P, [-1] * ncones, face=False)
    value = -sol.optimum
    result = DualExponent(
        a=value,
        multipliers={cd.sigma: sol.witness_vertex[k] for k, cd in enumerate(data)},
    )
    if check:
        primal = exponents_a_b(instance).a
        if primal != value:
            raise InconsistentResultError(f"primal a={primal} differs from dual a={value}")
    return result


def local_dual_exponent_a(instance: OrbifoldInstance, sigma: tuple[int, ...]) -> DualExponent:
    """Dual program attached to a single cone.

    Minimise ``lambda_0`` over ``lambda_0 >= 0`` and ``lambda_j >= 0`` (``j`` in
    ``sigma``) subject to, for ``i`` outside ``sigma``,
    ``lambda_0 alpha_{i,sigma} - sum_j beta_{sigma,i,j} lambda_j >= 1/m_i + gamma_i``
    with ``gamma_i = sum_j beta_{sigma,i,j} / m_j``.
    """
    if not is_ample(instance):
        raise NotAmpleError("the single-cone dual program requires an ample L")
    cd = cone_data(instance, sigma)
    varpi = instance.varpi
    nvars = 1 + len(sigma)
    rows: list[Row] = list(RationalPolytope.nonnegative_orthant(nvars))
    for i in cd.complement:
        gamma = sum((Fraction(cd.beta[i][j]) * varpi[j] for j in sigma), Fraction(0))
        a = [-cd.alpha[i]] + [Fraction(cd.beta[i][j]) for j in sigma]
        rows.append((tuple(a), -(varpi[i] + gamma)))
    P = RationalPolytope(nvars, rows)
    sol = lp_maximize(P, _unit(nvars, 0, -1), face=False)
    mult = {(j,): sol.witness_vertex[1 + k] for k, j in enumerate(sigma)}
    return DualExponent(a=-sol.optimum, multipliers=mult)


def alpha_L_per_cone(instance: OrbifoldInstance) -> dict[tuple[int, ...], Fraction]:
    """The volume constant computed separately in the chart of each maximal cone."""
    if not is_ample(instance):
        raise NotAmpleError("alpha(L) requires an ample L")
    out: dict[tuple[int, ...], Fraction] = {}
    for cd in all_cone_data(instance):
        comp = cd.complement
        r = len(comp)
        rows: list[Row] = list(RationalPolytope.nonnegative_orthant(r))
        for j in cd.sigma:
            rows.append((tuple(Fraction(-cd.beta[i][j]) for i in comp), Fraction(0)))
        region = RationalPolytope(r, rows)
        normal = tuple(cd.alpha[i] for i in comp)
        vol = slice_volume(region, normal, 1, measure_axis=0)
        out[cd.sigma] = vol / normal[0]
    return out


def alpha_L(instance: OrbifoldInstance) -> Fraction:
    """
    The volume constant ``alpha(L)`` of an ample divisor.

    In the chart of a cone ``sigma`` it is the volume of
    ``{z >= 0 : sum_i beta_{sigma,i,j} z_i >= 0 (j in sigma), sum_i alpha_{i,sigma} z_i = 1}``
    under ``alpha_{i0,sigma}^-1 prod_{i != i0} dz_i``. Every chart must give the
    same value.

    Raises
    ------
    NotAmpleError
        If L is not ample.
    InconsistentResultError
        If two charts disagree.
    """
    values = alpha_L_per_cone(instance)
    distinct = set(values.values())
    if len(distinct) != 1:
        raise InconsistentResultError(f"alpha(L) differs between cones: {sorted(distinct)}")
    return distinct.pop()


def closed_form_constant(instance: OrbifoldInstance) -> Fraction | None:
    """``alpha(L) / (s-r)! * sum_sigma prod_{i not in sigma} 1/m_i``.

    This is the leading coefficient of the slice volumes of ``P~`` under the
    measure ``prod varpi_i dt_i``. ``None`` unless L is log-anticanonical and ample.
    """
    if not instance.log_anticanonical or not is_ample(instance):
        return None
    fan = instance.fan
    varpi = instance.varpi
    total = Fraction(0)
    for sigma in fan.max_cones:
        prod = Fraction(1)
        for i in fan.complement(sigma):
            prod *= varpi[i]
        total += prod
    return alpha_L(instance) / math.factorial(fan.s - fan.r) * total


def face_barycentre(sol: LPSolution) -> tuple[Fraction, ...]:
    if not sol.face_vertices:
        raise PreconditionError("optimal face vertices are unavailable")
    n = len(sol.face_vertices)
    dim = len(sol.face_vertices[0])
    return tuple(sum((v[c] for v in sol.face_vertices), Fraction(0)) / n for c in range(dim))
