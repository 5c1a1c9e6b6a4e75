"""Exact vertex enumeration by basis enumeration."""

from __future__ import annotations

from itertools import combinations
from typing import TYPE_CHECKING

from campana_cli.errors import UnboundedPolytopeError
from campana_cli.polytope.linalg import Vector, dot, independent_rows, solve

if TYPE_CHECKING:
    from campana_cli.polytope.rational import RationalPolytope


def _feasible(P: RationalPolytope, x: Vector) -> bool:
    return all(dot(a, x) <= b for a, b in P.inequalities) and all(
        dot(e, x) == f for e, f in P.equalities
    )


def vertex_enumeration(P: RationalPolytope) -> list[Vector]:
    """
    All vertices of a bounded rational polytope, sorted and deduplicated.

    Every choice of inequalities that completes a basis of the equality rows
    to ``ambient_dim`` independent rows is solved exactly; feasible solutions
    are vertices. This costs one exact solve per ``C(rows, dim)`` choice,
    exponential in the number of rows; fine for the small polytopes here.

    Raises
    ------
    UnboundedPolytopeError
        If ``P`` is unbounded.
    """
    if not P.is_bounded():
        raise UnboundedPolytopeError(f"{P!r} is unbounded")
    d = P.ambient_dim
    eq_idx = independent_rows([e for e, _ in P.equalities])
    eq_rows = [P.equalities[i] for i in eq_idx]
    need = d - len(eq_rows)
    if need < 0:
        return []

    found: set[Vector] = set()
    for combo in combinations(range(len(P.inequalities)), need):
        rows = eq_rows + [P.inequalities[k] for k in combo]
        x = solve([a for a, _ in rows], [b for _, b in rows])
        if x is not None and _feasible(P, x):
            found.add(x)
    return sorted(found)


def vertex_facet_incidence(
    P: RationalPolytope, vertices: list[Vector]
) -> list[frozenset[int]]:
    """For each inequality row, the set of vertex indices lying on it."""
    return [
        frozenset(v for v, x in enumerate(vertices) if dot(a, x) == b)
        for a, b in P.inequalities
    ]
