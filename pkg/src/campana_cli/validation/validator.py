"""Fan validation.

A fan passes when every ray is primitive, every maximal cone is unimodular and
the cones cover ``R^n`` exactly once.
"""

from __future__ import annotations

import math
from itertools import combinations

from rich.console import Console
from sympy import Matrix

from campana_cli.core.models import Fan, FanValidationReport
from campana_cli.errors import (
    CampanaError,
    IncompleteFanError,
    NonPrimitiveRayError,
    NonSmoothConeError,
)
from campana_cli.toric.cones import generator_matrix

console = Console(stderr=True)

# Primes building the generic directions of the covering test
_DIRECTION_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _check_primitive(fan: Fan) -> list[CampanaError]:
    errors: list[CampanaError] = []
    for i, ray in enumerate(fan.rays):
        if math.gcd(*ray) != 1:
            errors.append(NonPrimitiveRayError(i, ray))
    return errors


def _check_smooth(fan: Fan) -> list[CampanaError]:
    errors: list[CampanaError] = []
    for sigma in fan.max_cones:
        det = int(generator_matrix(fan, sigma).det())
        if abs(det) != 1:
            errors.append(NonSmoothConeError(sigma, det))
    return errors


def _side(fan: Fan, facet: tuple[int, ...], ray: int) -> int:
    """Sign of ``ray`` relative to the hyperplane spanned by ``facet``."""
    rows = [list(fan.rays[i]) for i in facet] + [list(fan.rays[ray])]
    det = int(Matrix(rows).det())
    return (det > 0) - (det < 0)


def _check_facets(fan: Fan) -> list[CampanaError]:
    errors: list[CampanaError] = []
    shared: dict[tuple[int, ...], list[int]] = {}
    for sigma in fan.max_cones:
        for j in sigma:
            facet = tuple(i for i in sigma if i != j)
            shared.setdefault(facet, []).append(j)
    for facet, opposite in shared.items():
        if len(opposite) != 2:
            errors.append(
                IncompleteFanError(facet, f"shared by {len(opposite)} maximal cones, expected 2")
            )
            continue
        a, b = opposite
        if _side(fan, facet, a) * _side(fan, facet, b) >= 0:
            errors.append(IncompleteFanError(facet, "adjacent cones lie on the same side"))
    return errors


def _direction(dim: int, shift: int) -> list[int]:
    return [
        (-1) ** (k + shift) * _DIRECTION_PRIMES[(k + shift) % len(_DIRECTION_PRIMES)] ** (k + 1)
        for k in range(dim)
    ]


def _covering_degree(fan: Fan, point: list[int]) -> int | None:
    """Number of cones containing ``point`` in their interior, or None on a wall."""
    hits = 0
    for sigma in fan.max_cones:
        coeffs = generator_matrix(fan, sigma).T.LUsolve(Matrix(point))
        if any(c == 0 for c in coeffs):
            return None
        if all(c > 0 for c in coeffs):
            hits += 1
    return hits


def _check_covering(fan: Fan) -> list[CampanaError]:
    """Covering degree read off at fixed generic directions.

    Only meaningful after :func:`_check_facets` has passed: with every facet
    shared by two cones on opposite sides the degree is constant, so one
    direction off all walls decides it. Directions that hit a wall are skipped.
    """
    for shift in range(len(_DIRECTION_PRIMES)):
        degree = _covering_degree(fan, _direction(fan.dim, shift))
        if degree is None:
            continue
        if degree != 1:
            return [IncompleteFanError((), f"cones cover R^{fan.dim} {degree} times")]
        return []
    return []


def validate_fan(fan: Fan, strict: bool = True) -> FanValidationReport:
    """
    Check that ``fan`` is the fan of a smooth complete toric variety.

    Parameters
    ----------
    fan : Fan
        The fan to check.
    strict : bool
        Raise the first failure (primitivity, then smoothness, then
        completeness). Otherwise record every failure in the report.

    Returns
    -------
    FanValidationReport
        Verdicts, dimensions and collected messages.

    Raises
    ------
    NonPrimitiveRayError, NonSmoothConeError, IncompleteFanError
        In strict mode, in that order of precedence.
    """
    report = FanValidationReport(n=fan.dim, s=fan.s, r=fan.r, cones_checked=len(fan.max_cones))

    stages = [("primitive", _check_primitive), ("smooth", _check_smooth)]
    for attr, check in stages:
        failures = check(fan)
        if failures:
            if strict:
                raise failures[0]
            setattr(report, attr, False)
            report.errors.extend(str(e) for e in failures)

    failures = _check_facets(fan)
    if not failures and report.smooth:
        failures = _check_covering(fan)
    if not failures and fan.r < 1:
        failures = [IncompleteFanError((), f"s = {fan.s} rays cannot span a complete fan in R^{fan.dim}")]
    if failures:
        if strict:
            raise failures[0]
        report.complete = False
        report.errors.extend(str(e) for e in failures)

    used = {i for sigma in fan.max_cones for i in sigma}
    for i in range(fan.s):
        if i not in used:
            report.warnings.append(f"ray {i + 1} {fan.rays[i]} lies in no maximal cone")

    report.valid = report.primitive and report.smooth and report.complete
    return report


def print_validation_result(report: FanValidationReport, verbose: bool = False) -> None:
    """Print a validation report."""
    if report.valid:
        console.print(
            f"[green]✓ Fan is valid[/] (n={report.n}, s={report.s}, r={report.r}; "
            f"{report.cones_checked} cones checked)"
        )
    else:
        console.print("[red]✗ Fan validation failed[/]")
        for error in report.errors:
            console.print(f"  [red]• {error}[/]")

    if report.warnings and verbose:
        console.print("[yellow]Warnings:[/]")
        for warning in report.warnings:
            console.print(f"  [yellow]• {warning}[/]")
