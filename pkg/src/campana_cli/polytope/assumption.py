"""Checker for the face-dimension condition on coordinate sections.

For a polytope ``P`` in ``R^s`` with objective ``c``, optimum ``a`` and
optimal face ``F`` of dimension ``k``, the condition asks, for every nonempty
proper subset ``J`` and every small ``tau >= 0`` on the complement of ``J``,
that the optimal face of ``P ∩ {t_i = tau_i, i not in J}`` has dimension at
most ``k - 1`` whenever its optimum is close to ``a``.

The checker walks a ladder of sufficient criteria. Subsets that no criterion
settles are reported as unresolved; the checker never reports a violation.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Optional

import numpy as np
from rich.console import Console

from campana_cli.core.models import OrbifoldInstance
from campana_cli.errors import InfeasibleError, UnboundedLPError, UnboundedPolytopeError
from campana_cli.polytope.linalg import rank
from campana_cli.polytope.rational import RationalPolytope
from campana_cli.polytope.simplex import LPSolution, lp_maximize
from campana_cli.polytope.toric import build_tilde_P, face_barycentre
from campana_cli.polytope.vertices import vertex_enumeration, vertex_facet_incidence

console = Console(stderr=True)

SATISFIED = "satisfied"
UNRESOLVED = "unresolved"

# Perturbation sizes of the sampled sections; evidence only, never a verdict
SAMPLE_EPSILONS = (Fraction(1, 2**10), Fraction(1, 2**20))


@dataclass
class AssumptionVerdict:
    """Three-valued outcome: every subset settled, or some left unresolved."""

    status: str
    a: Fraction
    k: int
    s: int
    reasons: dict[str, str] = field(default_factory=dict)
    unresolved: list[tuple[int, ...]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def satisfied(self) -> bool:
        return self.status == SATISFIED


def _label(J: Sequence[int]) -> str:
    return "{" + ",".join(str(i + 1) for i in J) + "}"


def _zero_section(P: RationalPolytope, complement: Sequence[int]) -> RationalPolytope:
    return P.fix_coordinates({i: Fraction(0) for i in complement})


def is_simple(P: RationalPolytope) -> bool:
    """Whether every inequality defines a distinct facet and each vertex lies on exactly ``s`` of them."""
    s = P.ambient_dim
    verts = P.vertices()
    incidence = vertex_facet_incidence(P, verts)
    for k in range(len(P.inequalities)):
        if P.with_equalities([P.inequalities[k]]).dimension() != s - 1:
            return False
    if len(set(incidence)) != len(incidence):
        return False
    return all(sum(v in tight for tight in incidence) == s for v in range(len(verts)))


def _sample_taus(
    complement: Sequence[int], rng: np.random.Generator, random_samples: int
) -> list[dict[int, Fraction]]:
    taus: list[dict[int, Fraction]] = [{i: Fraction(0) for i in complement}]
    for eps in SAMPLE_EPSILONS:
        if len(complement) <= 6:
            for corner in product((Fraction(0), eps), repeat=len(complement)):
                taus.append(dict(zip(complement, corner)))
        for i in complement:
            taus.append({j: (eps if j == i else Fraction(0)) for j in complement})
        for _ in range(random_samples):
            taus.append({i: eps * Fraction(int(rng.integers(0, 1025)), 1024) for i in complement})
    return taus


def _dual_face_certificate(
    P: RationalPolytope,
    objective: Sequence[Fraction],
    J: Sequence[int],
    k: int,
) -> bool:
    """Exact check through the dual optimal face of the section at ``tau = 0``.

    For small ``tau`` every optimal vertex of the section's dual is a vertex
    of the dual optimal face at ``tau = 0``. Complementary slackness bounds
    the primal optimal face by ``|J| - rank`` of the rows in a dual support,
    so it suffices that every such vertex supports rows of rank at least
    ``|J| - k + 1``.
    """
    if P.equalities:
        return False
    rows = [
        (tuple(a[j] for j in J), b) for a, b in P.inequalities if any(a[j] != 0 for j in J)
    ]
    if not rows:
        return False
    c_J = tuple(objective[j] for j in J)
    try:
        v0 = lp_maximize(RationalPolytope(len(J), rows), c_J, face=False).optimum
    except (InfeasibleError, UnboundedLPError):
        return False
    n_rows = len(rows)
    equalities = [
        (tuple(rows[i][0][col] for i in range(n_rows)), c_J[col]) for col in range(len(J))
    ]
    equalities.append((tuple(b for _, b in rows), v0))
    dual = RationalPolytope(n_rows, RationalPolytope.nonnegative_orthant(n_rows), equalities)
    try:
        dual_vertices = vertex_enumeration(dual)
    except UnboundedPolytopeError:
        return False
    if not dual_vertices:
        return False
    need = len(J) - k + 1
    for y in dual_vertices:
        support = [rows[i][0] for i in range(n_rows) if y[i] > 0]
        if rank(support) < need:
            return False
    return True


def _sampled_face_dims(
    P: RationalPolytope,
    objective: Sequence[Fraction],
    complement: Sequence[int],
    k: int,
    rng: np.random.Generator,
    random_samples: int,
) -> tuple[int, int]:
    """Number of feasible sampled sections, and how many had face dimension at least ``k``."""
    feasible = wide = 0
    for tau in _sample_taus(complement, rng, random_samples):
        section = P.fix_coordinates(tau)
        try:
            sol = lp_maximize(section, objective, face=False)
        except InfeasibleError:
            continue
        feasible += 1
        if sol.optimal_face_dim > k - 1:
            wide += 1
    return feasible, wide


def check_polytope_assumption(
    P: RationalPolytope,
    objective: Sequence[Fraction | int],
    seed: int = 0,
    random_samples: int = 8,
    verbose: bool = False,
) -> AssumptionVerdict:
    """
    Decide the coordinate-section condition for a bounded polytope.

    Parameters
    ----------
    P : RationalPolytope
        Bounded polytope in ``R^s``.
    objective : sequence of Fraction
        Objective whose optimal face is examined.
    seed : int
        Seed for the sampled sections logged as evidence on unresolved subsets.
    random_samples : int
        Random sections per unresolved subset and perturbation size.
    verbose : bool
        Print one line per subset.

    Returns
    -------
    AssumptionVerdict
        ``satisfied`` if every subset is settled, otherwise ``unresolved``
        with the open subsets listed.
    """
    c = tuple(Fraction(v) for v in objective)
    s = P.ambient_dim
    sol: LPSolution = lp_maximize(P, c)
    a, k = sol.optimum, sol.optimal_face_dim
    verdict = AssumptionVerdict(status=SATISFIED, a=a, k=k, s=s)
    subsets = [J for size in range(1, s) for J in combinations(range(s), size)]

    interior = all(v > 0 for v in face_barycentre(sol))
    if not interior:
        verdict.warnings.append("optimal face lies in a coordinate hyperplane")

    if interior and s <= 2 * k + 1:
        for J in subsets:
            verdict.reasons[_label(J)] = f"s={s} <= 2k+1={2 * k + 1}"
        return verdict

    face_poly = P.with_equalities([(c, a)])
    simple: Optional[bool] = None
    rng = np.random.default_rng(seed)
    open_subsets: list[tuple[int, ...]] = []
    for J in subsets:
        label = _label(J)
        complement = [i for i in range(s) if i not in J]
        if len(J) <= k:
            verdict.reasons[label] = f"|J|={len(J)} <= k={k}"
            continue
        if interior:
            touches = _zero_section(face_poly, complement).is_feasible()
            if not touches:
                verdict.reasons[label] = "optimal face misses the coordinate section"
                continue
            if len(J) >= s - k:
                verdict.reasons[label] = f"|J|={len(J)} >= s-k={s - k} and face meets section"
                continue
            if simple is None:
                simple = is_simple(P)
            if simple:
                verdict.reasons[label] = "polytope is simple"
                continue
        if _dual_face_certificate(P, c, J, k):
            verdict.reasons[label] = f"dual optimal face forces face dimension <= {k - 1}"
            continue
        feasible, wide = _sampled_face_dims(P, c, complement, k, rng, random_samples)
        verdict.reasons[label] = (
            f"{UNRESOLVED}: {wide} of {feasible} sampled sections have face dimension >= {k}"
        )
        open_subsets.append(J)
        if verbose:
            console.print(f"[yellow]J={label} unresolved[/]")

    if open_subsets:
        verdict.status = UNRESOLVED
        verdict.unresolved = open_subsets
        verdict.warnings.append(
            "unresolved subsets: " + ", ".join(_label(J) for J in open_subsets)
        )
    return verdict


def check_assumption_polytopes(
    instance: OrbifoldInstance, seed: int = 0, verbose: bool = False
) -> AssumptionVerdict:
    """Run :func:`check_polytope_assumption` on ``P~`` of the log-anticanonical instance."""
    log_acan = OrbifoldInstance(fan=instance.fan, m=instance.m)
    P = build_tilde_P(log_acan)
    return check_polytope_assumption(P, log_acan.varpi, seed=seed, verbose=verbose)
