"""Exact slice volumes of rational polytopes.

A slice ``P ∩ {normal.t = level}`` is measured through its projection that
drops one coordinate (``measure_axis``). The projected polytope is
triangulated by pulling from its lowest vertex through the face lattice and
the simplices are measured with exact determinants.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Optional

import numpy as np
from rich.console import Console

from campana_cli.errors import DegenerateProjectionError, PreconditionError
from campana_cli.polytope.linalg import Vector, affine_rank, det, dot, solve
from campana_cli.polytope.rational import RationalPolytope
from campana_cli.polytope.simplex import lp_maximize, lp_minimize
from campana_cli.polytope.vertices import vertex_facet_incidence

if TYPE_CHECKING:
    from campana_cli.core.models import OrbifoldInstance

console = Console(stderr=True)


def project_slice(
    P: RationalPolytope,
    normal: Sequence[Fraction | int],
    level: Fraction | int,
    measure_axis: int,
) -> RationalPolytope:
    """The slice ``P ∩ {normal.t = level}`` written in the coordinates other than ``measure_axis``."""
    n = [Fraction(v) for v in normal]
    lvl = Fraction(level)
    pivot = n[measure_axis]
    if pivot == 0:
        raise DegenerateProjectionError(
            f"normal vector has zero coefficient on measure axis {measure_axis}"
        )
    keep = [j for j in range(P.ambient_dim) if j != measure_axis]

    def substitute(a: Vector, b: Fraction) -> tuple[Vector, Fraction]:
        ratio = a[measure_axis] / pivot
        return tuple(a[j] - ratio * n[j] for j in keep), b - ratio * lvl

    return RationalPolytope(
        len(keep),
        [substitute(a, b) for a, b in P.inequalities],
        [substitute(e, f) for e, f in P.equalities],
    )


def _triangulate(
    face: frozenset[int],
    dim: int,
    points: list[Vector],
    incidence: list[frozenset[int]],
    memo: dict[frozenset[int], list[tuple[int, ...]]],
) -> list[tuple[int, ...]]:
    if face in memo:
        return memo[face]
    apex = min(face)
    if dim == 0:
        memo[face] = [(apex,)]
        return memo[face]
    facets: set[frozenset[int]] = set()
    for tight in incidence:
        sub = face & tight
        if not sub or sub == face or apex in sub:
            continue
        if affine_rank([points[i] for i in sub]) == dim - 1:
            facets.add(sub)
    simplices = [
        (apex,) + simplex
        for sub in sorted(facets, key=sorted)
        for simplex in _triangulate(sub, dim - 1, points, incidence, memo)
    ]
    memo[face] = simplices
    return simplices


def polytope_volume(Q: RationalPolytope) -> Fraction:
    """Lebesgue volume of a bounded polytope in its ambient space (0 if not full-dimensional)."""
    D = Q.ambient_dim
    if not Q.is_feasible():
        return Fraction(0)
    if D == 0:
        return Fraction(1)
    points = Q.vertices()
    if affine_rank(points) < D:
        return Fraction(0)
    incidence = vertex_facet_incidence(Q, points)
    simplices = _triangulate(frozenset(range(len(points))), D, points, incidence, {})
    total = Fraction(0)
    for simplex in simplices:
        base = points[simplex[0]]
        edges = [[a - b for a, b in zip(points[v], base)] for v in simplex[1:]]
        total += abs(det(edges))
    return total / math.factorial(D)


def _weight_factor(weights: Optional[Sequence[Fraction | int]], measure_axis: int) -> Fraction:
    if weights is None:
        return Fraction(1)
    out = Fraction(1)
    for i, w in enumerate(weights):
        if i != measure_axis:
            out *= Fraction(w)
    return out


def slice_volume(
    P: RationalPolytope,
    normal: Sequence[Fraction | int],
    level: Fraction | int,
    measure_axis: int,
    weights: Optional[Sequence[Fraction | int]] = None,
) -> Fraction:
    """
    Exact volume of ``P ∩ {normal.t = level}`` projected along ``measure_axis``.

    Parameters
    ----------
    P : RationalPolytope
        Bounded polytope in ``R^s``.
    normal : sequence of Fraction
        Normal vector of the slicing hyperplane.
    level : Fraction
        Right-hand side of the slicing hyperplane.
    measure_axis : int
        Coordinate dropped by the projection; ``normal[measure_axis]`` must be nonzero.
    weights : sequence of Fraction, optional
        Density ``prod_{i != measure_axis} weights[i]`` of the measure.

    Returns
    -------
    Fraction
        The (s-1)-dimensional volume; 0 for empty or lower-dimensional slices.
    """
    Q = project_slice(P, normal, level, measure_axis)
    return polytope_volume(Q) * _weight_factor(weights, measure_axis)


@dataclass
class MonteCarloEstimate:
    estimate: float
    std_error: float
    samples: int


def monte_carlo_slice_volume(
    P: RationalPolytope,
    normal: Sequence[Fraction | int],
    level: Fraction | int,
    measure_axis: int,
    samples: int = 100_000,
    seed: int = 0,
    weights: Optional[Sequence[Fraction | int]] = None,
) -> MonteCarloEstimate:
    """Hit-or-miss estimate of :func:`slice_volume` over the slice's bounding box."""
    Q = project_slice(P, normal, level, measure_axis)
    factor = float(_weight_factor(weights, measure_axis))
    if not Q.is_feasible():
        return MonteCarloEstimate(0.0, 0.0, samples)
    if Q.ambient_dim == 0:
        return MonteCarloEstimate(factor, 0.0, samples)

    corners = np.array([[float(v) for v in p] for p in Q.vertices()])
    lo, hi = corners.min(axis=0), corners.max(axis=0)
    box = float(np.prod(hi - lo))
    if box == 0.0:
        return MonteCarloEstimate(0.0, 0.0, samples)

    rng = np.random.default_rng(seed)
    pts = rng.uniform(lo, hi, size=(samples, Q.ambient_dim))
    inside = np.ones(samples, dtype=bool)
    for a, b in Q.inequalities:
        inside &= pts @ np.array([float(v) for v in a]) <= float(b)
    p_hit = float(inside.mean())
    est = box * p_hit * factor
    err = box * math.sqrt(p_hit * (1.0 - p_hit) / samples) * factor
    return MonteCarloEstimate(est, err, samples)


@dataclass
class SliceVolumeSeries:
    """Slice volumes ``V(delta)`` of ``P ∩ {objective = a - delta}`` near the optimum."""

    deltas: list[Fraction]
    volumes: list[Fraction]
    optimum: Fraction
    face_dim: int
    expected_exponent: int
    fitted_exponent: float
    fitted_coefficient: float
    leading_coefficient: Fraction
    closed_form: Optional[Fraction] = None
    residuals: list[float] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def default_deltas(width: Fraction) -> list[Fraction]:
    """``2^-3 .. 2^-12`` times the objective range."""
    return [width / 2**e for e in range(3, 13)]


def _active_rows(P: RationalPolytope, objective: Vector, level: Fraction) -> frozenset[int]:
    slice_poly = P.with_equalities([(objective, level)])
    verts = slice_poly.vertices()
    return frozenset(
        k for k, (a, b) in enumerate(P.inequalities) if any(dot(a, v) == b for v in verts)
    )


def _interpolated_coefficient(
    ladder: Sequence[Fraction], volumes: Sequence[Fraction], degree: int, exponent: int
) -> tuple[Optional[Fraction], list[str]]:
    """Coefficient of ``delta^exponent`` in the polynomial through the smallest deltas.

    Near the optimum the slice volume is a polynomial of degree at most
    ``degree`` in ``delta``; the remaining ladder points must lie on it.
    """
    if len(ladder) < degree + 1:
        return None, []
    points = list(zip(ladder, volumes))[-(degree + 1):]
    vander = [[d**j for j in range(degree + 1)] for d, _ in points]
    coeffs = solve(vander, [v for _, v in points])
    if coeffs is None:
        return None, []
    warnings: list[str] = []
    for d, v in zip(ladder, volumes):
        if sum((c * d**j for j, c in enumerate(coeffs)), Fraction(0)) != v:
            warnings.append(f"slice volume at delta={d} is off the interpolating polynomial")
            return None, warnings
    if any(c != 0 for c in coeffs[:exponent]):
        warnings.append("slice volume has terms below the expected order in delta")
    return coeffs[exponent], warnings


def slice_volume_series(
    P: RationalPolytope,
    objective: Sequence[Fraction | int],
    k_expected: Optional[int] = None,
    deltas: Optional[Sequence[Fraction]] = None,
    weights: Optional[Sequence[Fraction | int]] = None,
    instance: Optional[OrbifoldInstance] = None,
    verbose: bool = False,
) -> SliceVolumeSeries:
    """
    Volumes of the slices just below the optimal face and their power-law fit.

    The volumes behave like ``c * delta^(s-1-k)`` with ``k`` the dimension of
    the optimal face. Large deltas at which the slice meets other constraint
    rows than at the smallest delta are dropped before fitting.

    Parameters
    ----------
    P : RationalPolytope
        Bounded polytope in ``R^s``.
    objective : sequence of Fraction
        Linear form whose level sets are sliced.
    k_expected : int, optional
        Expected optimal face dimension; a mismatch is recorded as a warning.
    deltas : sequence of Fraction, optional
        Distances below the optimum. Defaults to :func:`default_deltas`.
    weights : sequence of Fraction, optional
        Density weights passed to :func:`slice_volume`.
    instance : OrbifoldInstance, optional
        When it is log-anticanonical and ample, the closed-form leading
        coefficient is added for comparison.

    Returns
    -------
    SliceVolumeSeries
    """
    from campana_cli.polytope.toric import closed_form_constant

    c = tuple(Fraction(v) for v in objective)
    axis = next((i for i, v in enumerate(c) if v != 0), None)
    if axis is None:
        raise PreconditionError("objective is identically zero")

    sol = lp_maximize(P, c, face=False)
    low = lp_minimize(P, c)
    width = sol.optimum - low
    if width == 0:
        raise PreconditionError("objective is constant on the polytope")
    k = sol.optimal_face_dim
    warnings: list[str] = []
    if k_expected is not None and k != k_expected:
        warnings.append(f"optimal face has dimension {k}, expected {k_expected}")

    ladder = sorted(set(deltas) if deltas is not None else default_deltas(width), reverse=True)
    reference = _active_rows(P, c, sol.optimum - ladder[-1])
    while len(ladder) > 2 and _active_rows(P, c, sol.optimum - ladder[0]) != reference:
        warnings.append(f"dropped delta={ladder[0]} (slice meets other facets)")
        ladder.pop(0)

    volumes = []
    for delta in ladder:
        volumes.append(slice_volume(P, c, sol.optimum - delta, axis, weights))
        if verbose:
            console.print(f"[dim]delta={delta}: volume {float(volumes[-1]):.6g}[/]")

    exponent = P.ambient_dim - 1 - k
    pairs = [(d, v) for d, v in zip(ladder, volumes) if v > 0]
    fitted_exponent, fitted_coefficient = float("nan"), float("nan")
    residuals: list[float] = []
    if len(pairs) >= 2:
        x = np.log([float(d) for d, _ in pairs])
        y = np.log([float(v) for _, v in pairs])
        slope, intercept = np.polyfit(x, y, 1)
        fitted_exponent, fitted_coefficient = float(slope), float(math.exp(intercept))
        residuals = [float(r) for r in y - (slope * x + intercept)]
    else:
        warnings.append("fewer than two positive volumes; no fit")

    leading, interp_warnings = _interpolated_coefficient(ladder, volumes, P.ambient_dim - 1, exponent)
    warnings.extend(interp_warnings)
    if leading is None:
        leading = volumes[-1] / ladder[-1] ** exponent

    closed_form = None
    if instance is not None:
        closed_form = closed_form_constant(instance)

    return SliceVolumeSeries(
        deltas=list(ladder),
        volumes=volumes,
        optimum=sol.optimum,
        face_dim=k,
        expected_exponent=exponent,
        fitted_exponent=fitted_exponent,
        fitted_coefficient=fitted_coefficient,
        leading_coefficient=leading,
        closed_form=closed_form,
        residuals=residuals,
        warnings=warnings,
    )
