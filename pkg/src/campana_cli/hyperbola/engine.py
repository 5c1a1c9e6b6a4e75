"""Main term of a monomially constrained sum and the exact oracle it is tested against.

For ``f`` with box constants ``C_M``, ``varpi`` and a system of constraints
``prod_i y_i^alpha_{ik} <= B^b_k``, the sum ``S_f(B)`` of ``f`` over the region is
predicted to be ``(s-1-k)! C_M c_P (log B)^k B^a``. Here ``a`` is the maximum
of ``sum_i t_i`` over the polytope ``P`` of the system, ``k`` the dimension
of the optimal face and ``c_P`` the leading coefficient of the slice volumes
just below that face.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Union

import mpmath
from rich.console import Console
from sympy import integer_nthroot

from campana_cli.core.rationals import lcm_of_denominators, to_mpf
from campana_cli.errors import BoundTooLargeError, InvalidSystemError, PreconditionError
from campana_cli.hyperbola.boxes import BoxConstraintSystem
from campana_cli.hyperbola.functions import PropertyIFunction
from campana_cli.polytope.assumption import AssumptionVerdict, check_polytope_assumption
from campana_cli.polytope.simplex import lp_maximize
from campana_cli.polytope.toric import face_barycentre
from campana_cli.polytope.volume import SliceVolumeSeries, slice_volume_series

console = Console(stderr=True)

DEFAULT_WORK_CAP = 10**8


@dataclass
class HyperbolaEstimate:
    """Predicted main term of ``S_f(B)`` with the data it was built from."""

    bound: float
    a: Fraction
    k: int
    c_P: Fraction
    main_term: float
    error_scale: float
    assumption: AssumptionVerdict
    series: SliceVolumeSeries
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "a": str(self.a),
            "k": self.k,
            "c_P": str(self.c_P),
            "main_term": self.main_term,
            "error_scale": self.error_scale,
            "assumption": self.assumption.status,
        }


def hyperbola_main_term(
    f: PropertyIFunction,
    system: BoxConstraintSystem,
    bound: Union[int, float],
    seed: int = 0,
    verbose: bool = False,
) -> HyperbolaEstimate:
    """
    Predicted main term ``(s-1-k)! C_M c_P (log B)^k B^a``.

    Parameters
    ----------
    f : PropertyIFunction
        Function being summed.
    system : BoxConstraintSystem
        Constraints cutting out the region.
    bound : int or float
        The bound ``B``, at least 3.
    seed : int
        Seed for the sampled criterion of the assumption checker.
    verbose : bool
        Print the intermediate quantities.

    Returns
    -------
    HyperbolaEstimate
        Also carries the error scale ``C_E (log log B)^s (log B)^(k-1) B^a``.

    Raises
    ------
    UnboundedPolytopeError
        If some variable occurs in no constraint.
    PreconditionError
        If the optimal face lies in a coordinate hyperplane.
    """
    if bound < 3:
        raise PreconditionError(f"the main term needs B >= 3, got {bound}")
    s = f.arity
    P = system.polytope(f.varpi)
    if P.dimension() != s:
        raise InvalidSystemError("the constraint polytope is not full-dimensional")
    ones = (Fraction(1),) * s
    sol = lp_maximize(P, ones)
    a, k = sol.optimum, sol.optimal_face_dim
    if any(v == 0 for v in face_barycentre(sol)):
        raise PreconditionError("the optimal face lies in a coordinate hyperplane")

    warnings: list[str] = []
    verdict = check_polytope_assumption(P, ones, seed=seed)
    if not verdict.satisfied:
        warnings.append("face-dimension condition unresolved; the prediction may not apply")
    series = slice_volume_series(P, ones, k_expected=k)
    warnings.extend(series.warnings)
    c_P = series.leading_coefficient

    B = mpmath.mpf(bound)
    logB = mpmath.log(B)
    growth = mpmath.power(B, to_mpf(a))
    main = math.factorial(s - 1 - k) * f.C_M * to_mpf(c_P)
    main *= logB**k * growth
    error = f.C_E * mpmath.log(logB) ** s * logB ** (k - 1) * growth
    if verbose:
        console.print(f"[bold blue]a:[/] {a}  [bold blue]k:[/] {k}  [bold blue]c_P:[/] {c_P}")
    return HyperbolaEstimate(
        bound=float(bound),
        a=a,
        k=k,
        c_P=c_P,
        main_term=float(main),
        error_scale=float(error),
        assumption=verdict,
        series=series,
        warnings=warnings,
    )


@dataclass(frozen=True)
class _SumPlan:
    """Integer form of the constraints: ``prod_i y_i^powers[k][i] <= limits[k]``."""

    order: tuple[int, ...]
    powers: tuple[tuple[int, ...], ...]
    limits: tuple[int, ...]
    ranges: tuple[int, ...]
    work_cap: int


def _plan(system: BoxConstraintSystem, s: int, bound: int, work_cap: int) -> _SumPlan:
    powers, limits = [], []
    for row, bk in zip(system.alpha, system.b):
        if len(row) != s:
            raise InvalidSystemError(f"alpha rows have {len(row)} entries, f has arity {s}")
        q = lcm_of_denominators(list(row) + [bk])
        powers.append(tuple(int(v * q) for v in row))
        limits.append(bound ** int(bk * q))
    ranges = []
    for i in range(s):
        caps = [integer_nthroot(lim, pw[i])[0] for pw, lim in zip(powers, limits) if pw[i] > 0]
        if not caps:
            raise InvalidSystemError(f"variable {i + 1} has no positive exponent in any constraint")
        ranges.append(min(caps))
    order = tuple(sorted(range(s), key=lambda i: (ranges[i], i)))
    return _SumPlan(order, tuple(powers), tuple(limits), tuple(ranges), work_cap)


def _inner_limit(plan: _SumPlan, j: int, products: Sequence[int]) -> int:
    limit = plan.ranges[j]
    for pw, lim, prod in zip(plan.powers, plan.limits, products):
        if pw[j] > 0:
            limit = min(limit, integer_nthroot(lim // prod, pw[j])[0])
    return limit


def _descend(
    f: PropertyIFunction,
    plan: _SumPlan,
    depth: int,
    products: list[int],
    work: list[int],
) -> int:
    j = plan.order[depth]
    if depth == len(plan.order) - 1:
        return f.count_upto(j, _inner_limit(plan, j, products))
    total = 0
    for y in f.support(j, plan.ranges[j]):
        work[0] += 1
        if work[0] > plan.work_cap:
            raise BoundTooLargeError(f"exact sum exceeded the work cap {plan.work_cap}")
        nxt = [prod * y ** pw[j] for prod, pw in zip(products, plan.powers)]
        if any(v > lim for v, lim in zip(nxt, plan.limits)):
            break
        total += _descend(f, plan, depth + 1, nxt, work)
    return total


def _sum_chunk(args: tuple[PropertyIFunction, _SumPlan, tuple[int, ...]]) -> int:
    f, plan, values = args
    j = plan.order[0]
    work = [0]
    total = 0
    for y in values:
        products = [y ** pw[j] for pw in plan.powers]
        if any(v > lim for v, lim in zip(products, plan.limits)):
            break
        total += _descend(f, plan, 1, products, work)
    return total


def exact_S_f(
    f: PropertyIFunction,
    system: BoxConstraintSystem,
    bound: Union[int, float],
    work_cap: int = DEFAULT_WORK_CAP,
    workers: int = 1,
) -> int:
    """
    Exact ``sum f(y)`` over ``y in N^s`` with ``prod_i y_i^alpha_{ik} <= B^b_k``.

    The coordinates are ordered by their individual range; the widest one is
    counted with :meth:`PropertyIFunction.count_upto` and the others are
    walked over their supports with early exit. With ``workers > 1`` the
    outermost support is split into contiguous chunks summed in a process
    pool; each chunk enforces ``work_cap`` on its own.

    Raises
    ------
    BoundTooLargeError
        If the walk visits more than ``work_cap`` outer points.
    PreconditionError
        If ``f`` is not separable.
    """
    if not f.separable:
        raise PreconditionError(f"{f.name} is not separable; exact sums need per-coordinate counts")
    B = int(bound)
    if B < 1:
        return 0
    plan = _plan(system, f.arity, B, work_cap)
    if f.arity == 1:
        return _descend(f, plan, 0, [1] * len(plan.limits), [0])

    outer = f.support(plan.order[0], plan.ranges[plan.order[0]])
    if len(outer) > work_cap:
        raise BoundTooLargeError(f"outer range {len(outer)} exceeds the work cap {work_cap}")
    if workers <= 1 or len(outer) < 2 * workers:
        return _sum_chunk((f, plan, outer))
    size = -(-len(outer) // workers)
    chunks = [outer[i : i + size] for i in range(0, len(outer), size)]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return sum(executor.map(_sum_chunk, [(f, plan, chunk) for chunk in chunks]))


@dataclass
class RestrictedConstantCheck:
    lhs: float
    rhs: float
    ratio: float


def restricted_constant_sum_check(
    f: PropertyIFunction,
    I: Sequence[int],  # noqa: E741
    bounds: Sequence[int],
) -> RestrictedConstantCheck:
    """Compare ``sum_{y_I <= B_I} C_{M,I}(y_I)`` with ``C_M prod_{i in I} B_i^varpi_i``.

    ``I`` is 0-indexed and ``bounds`` lists ``B_i`` for ``i`` in ``I``. For
    separable ``f`` the restricted constant is the same at every supported
    ``y_I``, so the left side is that constant times the supported count.
    """
    idx = tuple(I)
    if not idx or len(set(idx)) == f.arity or len(set(idx)) != len(idx):
        raise PreconditionError("I must be a nonempty proper subset without repeats")
    if any(i < 0 or i >= f.arity for i in idx):
        raise PreconditionError(f"I has entries outside 0..{f.arity - 1}")
    if len(bounds) != len(idx):
        raise PreconditionError("give one bound per coordinate in I")
    B = [int(b) for b in bounds]

    if f.separable:
        supports = [f.support(i, b) for i, b in zip(idx, B)]
        if any(not sup for sup in supports):
            lhs = mpmath.mpf(0)
        else:
            count = math.prod(f.count_upto(i, b) for i, b in zip(idx, B))
            lhs = count * f.restricted_constant(idx, [sup[0] for sup in supports])
    else:
        lhs = mpmath.fsum(
            f.restricted_constant(idx, y) for y in product(*(range(1, b + 1) for b in B))
        )
    rhs = f.C_M * mpmath.fprod(mpmath.power(b, to_mpf(f.varpi[i])) for i, b in zip(idx, B))
    ratio = float(lhs / rhs) if rhs else float("nan")
    return RestrictedConstantCheck(float(lhs), float(rhs), ratio)


def dirichlet_system() -> BoxConstraintSystem:
    """``y_1 y_2 <= B``."""
    return BoxConstraintSystem.from_rows([[1, 1]], [1])


def demo_setup(
    preset: str, prime_cutoff: int = 10**5
) -> tuple[PropertyIFunction, BoxConstraintSystem]:
    """Bundled demonstrations: ``dirichlet`` (f = 1) and ``squarefull`` (pairs of squarefull integers)."""
    from campana_cli.hyperbola.functions import MFullFunction, UnitFunction

    if preset == "dirichlet":
        return UnitFunction(2), dirichlet_system()
    if preset == "squarefull":
        return MFullFunction((2, 2), (1, 1), prime_cutoff), dirichlet_system()
    raise PreconditionError(f"unknown demo preset '{preset}'")


def ratio_series(
    f: PropertyIFunction,
    system: BoxConstraintSystem,
    bounds: Sequence[int],
    work_cap: int = DEFAULT_WORK_CAP,
    workers: int = 1,
    verbose: bool = False,
) -> list[dict]:
    """Rows ``(B, exact, main_term, ratio)`` along a list of bounds."""
    rows = []
    for B in bounds:
        est = hyperbola_main_term(f, system, B)
        exact = exact_S_f(f, system, B, work_cap=work_cap, workers=workers)
        ratio = exact / est.main_term if est.main_term else float("nan")
        rows.append({"B": int(B), "exact": exact, "main_term": est.main_term, "ratio": ratio})
        if verbose:
            console.print(f"[dim]B={B}: exact {exact}, main {est.main_term:.6g}, ratio {ratio:.4f}[/]")
    return rows
