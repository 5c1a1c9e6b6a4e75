"""Comparison of exact counts with the predicted asymptotic."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import mpmath
from rich.console import Console

from campana_cli.core.models import OrbifoldInstance
from campana_cli.core.rationals import to_mpf
from campana_cli.counting.constant import LeadingConstant, leading_constant
from campana_cli.counting.height import Bound
from campana_cli.counting.points import DEFAULT_WORK_CAP, count_N
from campana_cli.errors import PreconditionError
from campana_cli.polytope.assumption import AssumptionVerdict, check_assumption_polytopes
from campana_cli.polytope.toric import alpha_L, exponents_a_b

console = Console(stderr=True)

COLUMNS = ["B", "N", "prediction", "ratio"]


@dataclass
class AsymptoticReport:
    """Exact counts along a list of bounds against ``c B (log B)^(b-1)``."""

    fan_hash: str
    m: tuple[int, ...]
    a: Fraction
    b: int
    alpha_L: Fraction
    constant: LeadingConstant
    assumption: AssumptionVerdict
    prime_cutoff: int
    work_cap: int
    rows: list[dict[str, Any]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "fan_hash": self.fan_hash,
            "m": list(self.m),
            "a": str(self.a),
            "b": self.b,
            "alpha_L": str(self.alpha_L),
            "constant": self.constant.to_dict(),
            "assumption": {
                "status": self.assumption.status,
                "unresolved": [[i + 1 for i in J] for J in self.assumption.unresolved],
            },
            "prime_cutoff": self.prime_cutoff,
            "work_cap": self.work_cap,
            "rows": self.rows,
        }


def prediction(c: mpmath.mpf, bound: Bound, a: Fraction, b: int) -> float:
    """``c B^a (log B)^(b-1)``."""
    B = to_mpf(bound)
    return float(c * mpmath.power(B, to_mpf(a)) * mpmath.log(B) ** (b - 1))


def asymptotic_report(
    instance: OrbifoldInstance,
    bounds: Sequence[Bound],
    prime_cutoff: int = 10**5,
    work_cap: int = DEFAULT_WORK_CAP,
    workers: int = 1,
    seed: int = 0,
    verbose: bool = False,
) -> AsymptoticReport:
    """
    Count ``N(B)`` exactly for every bound and compare with the prediction.

    Parameters
    ----------
    instance : OrbifoldInstance
        Instance with the log-anticanonical height.
    bounds : sequence
        Strictly increasing bounds, each greater than 1.
    prime_cutoff : int
        Cutoff of the Euler products in the constant.
    work_cap, workers : int
        Passed to :func:`count_N`.
    seed : int
        Seed of the assumption checker.
    verbose : bool
        Print one line per bound.

    Returns
    -------
    AsymptoticReport
        A ratio sequence whose distance to 1 grows somewhere is recorded as a
        warning.
    """
    values = list(bounds)
    if not values:
        raise PreconditionError("no bounds given")
    if any(b2 <= b1 for b1, b2 in zip(values, values[1:])):
        raise PreconditionError("bounds must be strictly increasing")
    if values[0] <= 1:
        raise PreconditionError("bounds must exceed 1")

    exps = exponents_a_b(instance)
    verdict = check_assumption_polytopes(instance, seed=seed)
    lc = leading_constant(instance, prime_cutoff)
    report = AsymptoticReport(
        fan_hash=instance.fingerprint(),
        m=tuple(instance.m),
        a=exps.a,
        b=exps.b,
        alpha_L=alpha_L(instance),
        constant=lc,
        assumption=verdict,
        prime_cutoff=prime_cutoff,
        work_cap=work_cap,
    )
    report.warnings.extend(lc.warnings)
    report.warnings.extend(verdict.warnings)

    for B in values:
        n_value = count_N(instance, B, work_cap=work_cap, workers=workers)
        pred = prediction(lc.c, B, exps.a, exps.b)
        ratio = n_value / pred
        report.rows.append({"B": B, "N": n_value, "prediction": pred, "ratio": ratio})
        if verbose:
            console.print(f"[dim]B={B}: N={n_value}, prediction {pred:.6g}, ratio {ratio:.5f}[/]")

    deviations = [abs(row["ratio"] - 1) for row in report.rows]
    if any(later > earlier for earlier, later in zip(deviations, deviations[1:])):
        report.warnings.append("ratio N(B)/prediction does not approach 1 monotonically")
    return report
