"""Exact two-phase simplex method over the rationals.

Programs are solved in standard form ``max c.y`` subject to ``A y = b`` and
``y >= 0`` with Bland's rule, so the method terminates on degenerate
polytopes. Free variables are split as ``x = x+ - x-`` and inequalities get
slack columns. Optimal solutions come with a dual certificate that is checked
exactly against the primal optimum.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Optional

from campana_cli.errors import InconsistentResultError, InfeasibleError, UnboundedLPError
from campana_cli.polytope.linalg import Vector, dot, nullspace_vector, rank

if TYPE_CHECKING:
    from campana_cli.polytope.rational import RationalPolytope

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class _Result:
    status: str
    value: Optional[Fraction] = None
    y: Optional[Vector] = None


def _pivot(T: list[list[Fraction]], r: int, c: int) -> None:
    p = T[r][c]
    if p != 1:
        T[r] = [v / p for v in T[r]]
    row = T[r]
    for i in range(len(T)):
        if i != r and T[i][c] != 0:
            f = T[i][c]
            T[i] = [a - f * b for a, b in zip(T[i], row)]


def _run_phase(
    T: list[list[Fraction]], basis: list[int], cost: Sequence[Fraction], ncols: int
) -> str:
    """Maximise ``cost . y`` from the basic feasible tableau ``T`` in place."""
    m = len(T)
    while True:
        in_basis = set(basis)
        entering = None
        for j in range(ncols):
            if j in in_basis:
                continue
            reduced = cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(m))
            if reduced > 0:
                entering = j
                break
        if entering is None:
            return OPTIMAL

        leave = None
        best: Optional[Fraction] = None
        for i in range(m):
            a = T[i][entering]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return UNBOUNDED
        _pivot(T, leave, entering)
        basis[leave] = entering


def solve_standard(
    A: Sequence[Sequence[Fraction]], b: Sequence[Fraction], c: Sequence[Fraction]
) -> _Result:
    """Solve ``max c.y`` subject to ``A y = b`` and ``y >= 0``."""
    n = len(c)
    rows = [[Fraction(v) for v in row] for row in A]
    rhs = [Fraction(v) for v in b]
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
    m = len(rows)
    if m == 0:
        if any(cj > 0 for cj in c):
            return _Result(UNBOUNDED)
        return _Result(OPTIMAL, Fraction(0), tuple(Fraction(0) for _ in range(n)))

    # Phase 1: one artificial column per row
    T = [rows[i] + [Fraction(int(k == i)) for k in range(m)] + [rhs[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    phase1_cost = [Fraction(0)] * n + [Fraction(-1)] * m
    _run_phase(T, basis, phase1_cost, n + m)
    if any(basis[i] >= n and T[i][-1] != 0 for i in range(m)):
        return _Result(INFEASIBLE)

    # Drive remaining artificials out of the basis; rows where that fails are redundant
    keep: list[int] = []
    for i in range(m):
        if basis[i] >= n:
            j = next((j for j in range(n) if T[i][j] != 0 and j not in basis), None)
            if j is None:
                continue
            _pivot(T, i, j)
            basis[i] = j
        keep.append(i)
    T = [T[i][:n] + [T[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]

    cost = [Fraction(v) for v in c]
    status = _run_phase(T, basis, cost, n)
    if status == UNBOUNDED:
        return _Result(UNBOUNDED)
    y = [Fraction(0)] * n
    for i, j in enumerate(basis):
        y[j] = T[i][-1]
    return _Result(OPTIMAL, dot(cost, y), tuple(y))


def solve_lp(
    dim: int,
    inequalities: Sequence[tuple[Vector, Fraction]],
    equalities: Sequence[tuple[Vector, Fraction]],
    objective: Sequence[Fraction],
) -> _Result:
    """Solve ``max objective.x`` over ``{a.x <= b} ∩ {e.x = f}`` with ``x`` free."""
    m_ub = len(inequalities)
    A: list[list[Fraction]] = []
    b: list[Fraction] = []
    for k, (a, rhs) in enumerate(inequalities):
        slack = [Fraction(int(k == j)) for j in range(m_ub)]
        A.append(list(a) + [-v for v in a] + slack)
        b.append(rhs)
    for e, rhs in equalities:
        A.append(list(e) + [-v for v in e] + [Fraction(0)] * m_ub)
        b.append(rhs)
    c = list(objective) + [-Fraction(v) for v in objective] + [Fraction(0)] * m_ub
    res = solve_standard(A, b, c)
    if res.status != OPTIMAL:
        return res
    assert res.y is not None
    x = tuple(res.y[i] - res.y[dim + i] for i in range(dim))
    return _Result(OPTIMAL, res.value, x)


def tight_rows(P: RationalPolytope, x: Sequence[Fraction]) -> list[int]:
    return [k for k, (a, b) in enumerate(P.inequalities) if dot(a, x) == b]


def move_to_vertex(P: RationalPolytope, x: Vector) -> Vector:
    """Walk from a feasible ``x`` to a vertex of the smallest face containing it.

    Each step moves along a direction in the null space of the active rows
    until another row becomes tight. On polytopes without vertices the walk
    stops at the last point reached.
    """
    d = P.ambient_dim
    point = list(x)
    while True:
        active = [P.inequalities[k][0] for k in tight_rows(P, point)]
        active += [e for e, _ in P.equalities]
        if rank(active) >= d:
            return tuple(point)
        v = nullspace_vector(active, d)
        if v is None:
            return tuple(point)
        moved = False
        for direction in (v, tuple(-c for c in v)):
            steps = [
                (b - dot(a, point)) / dot(a, direction)
                for a, b in P.inequalities
                if dot(a, direction) > 0
            ]
            if steps:
                step = min(steps)
                point = [p + step * c for p, c in zip(point, direction)]
                moved = True
                break
        if not moved:
            return tuple(point)


def dual_certificate(
    P: RationalPolytope, objective: Sequence[Fraction], x: Sequence[Fraction]
) -> Optional[tuple[Vector, Vector]]:
    """Multipliers ``y >= 0`` on the rows tight at ``x`` and free ``z`` on equalities.

    They satisfy ``sum y_k a_k + sum z_l e_l = objective``. Rows not tight at
    ``x`` get multiplier 0. Returns ``None`` if no such multipliers exist, which
    means ``x`` is not optimal.
    """
    d = P.ambient_dim
    tight = tight_rows(P, x)
    n_eq = len(P.equalities)
    A: list[list[Fraction]] = []
    for c in range(d):
        row = [P.inequalities[k][0][c] for k in tight]
        eq_part = [P.equalities[l][0][c] for l in range(n_eq)]
        A.append(row + eq_part + [-v for v in eq_part])
    ncols = len(tight) + 2 * n_eq
    res = solve_standard(A, list(objective), [Fraction(0)] * ncols)
    if res.status != OPTIMAL:
        return None
    assert res.y is not None
    y_full = [Fraction(0)] * len(P.inequalities)
    for pos, k in enumerate(tight):
        y_full[k] = res.y[pos]
    base = len(tight)
    z = tuple(res.y[base + l] - res.y[base + n_eq + l] for l in range(n_eq))
    return tuple(y_full), z


@dataclass
class LPSolution:
    """Exact optimum of a linear program over a rational polytope.

    Primal feasibility of the witness, dual feasibility of the certificate and
    strong duality are checked on construction.
    """

    optimum: Fraction
    witness_vertex: Vector
    optimal_face_dim: int
    dual_witness: tuple[Vector, Vector]
    face_vertices: list[Vector] = field(default_factory=list)
    objective: Vector = ()
    polytope: Optional[RationalPolytope] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        P = self.polytope
        if P is None:
            return
        if not P.contains(self.witness_vertex):
            raise InconsistentResultError("LP witness violates a constraint")
        if dot(self.objective, self.witness_vertex) != self.optimum:
            raise InconsistentResultError("LP witness does not attain the optimum")
        y, z = self.dual_witness
        if any(v < 0 for v in y):
            raise InconsistentResultError("negative dual multiplier")
        for c in range(P.ambient_dim):
            combo = sum((y[k] * P.inequalities[k][0][c] for k in range(len(y))), Fraction(0))
            combo += sum((z[l] * P.equalities[l][0][c] for l in range(len(z))), Fraction(0))
            if combo != self.objective[c]:
                raise InconsistentResultError("dual certificate is not dual feasible")
        dual_value = sum((y[k] * P.inequalities[k][1] for k in range(len(y))), Fraction(0))
        dual_value += sum((z[l] * P.equalities[l][1] for l in range(len(z))), Fraction(0))
        if dual_value != self.optimum:
            raise InconsistentResultError(
                f"strong duality fails: primal {self.optimum}, dual {dual_value}"
            )


def lp_maximize(
    P: RationalPolytope, objective: Sequence[Fraction | int], face: bool = True
) -> LPSolution:
    """
    Maximise a linear objective over a polytope exactly.

    Parameters
    ----------
    P : RationalPolytope
        Feasible region.
    objective : sequence of Fraction
        Objective coefficients.
    face : bool
        Also enumerate the vertices of the optimal face (bounded ``P`` only).

    Returns
    -------
    LPSolution
        Optimum, a vertex attaining it, the dimension of the optimal face and
        a verified dual certificate.

    Raises
    ------
    InfeasibleError
        If ``P`` is empty.
    UnboundedLPError
        If the objective is unbounded above on ``P``.
    """
    c = tuple(Fraction(v) for v in objective)
    res = solve_lp(P.ambient_dim, P.inequalities, P.equalities, c)
    if res.status == INFEASIBLE:
        raise InfeasibleError("linear program is infeasible")
    if res.status == UNBOUNDED:
        raise UnboundedLPError("linear program is unbounded")
    assert res.y is not None and res.value is not None

    witness = move_to_vertex(P, res.y)
    cert = dual_certificate(P, c, witness)
    if cert is None:
        raise InconsistentResultError("no dual certificate at the simplex optimum")

    optimal_face = P.with_equalities([(c, res.value)])
    face_dim = optimal_face.dimension()
    face_vertices: list[Vector] = []
    if face and P.is_bounded():
        face_vertices = optimal_face.vertices()

    return LPSolution(
        optimum=res.value,
        witness_vertex=witness,
        optimal_face_dim=face_dim,
        dual_witness=cert,
        face_vertices=face_vertices,
        objective=c,
        polytope=P,
    )


def lp_minimize(P: RationalPolytope, objective: Sequence[Fraction | int]) -> Fraction:
    """Minimum of ``objective`` over ``P``."""
    res = solve_lp(
        P.ambient_dim, P.inequalities, P.equalities, tuple(-Fraction(v) for v in objective)
    )
    if res.status == INFEASIBLE:
        raise InfeasibleError("linear program is infeasible")
    if res.status == UNBOUNDED:
        raise UnboundedLPError("linear program is unbounded below")
    assert res.value is not None
    return -res.value
