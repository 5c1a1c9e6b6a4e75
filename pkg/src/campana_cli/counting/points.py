"""Exact counts of Campana points of bounded height.

``N(B)`` is ``2^(s-r)`` times the number of positive vectors ``y`` with ``y_i``
m_i-full, coprime on the torsor and ``H(y) <= B``. ``A(B, d)`` drops
coprimality, asks ``d_i | y_i`` and counts all sign patterns (``2^s`` times the
positive count).
"""

from __future__ import annotations

import math
from bisect import bisect_right
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

from rich.console import Console
from sympy import integer_nthroot

from campana_cli.core._cache import m_full_stream
from campana_cli.core.models import OrbifoldInstance
from campana_cli.counting.height import Bound, HeightEvaluator, bound_power
from campana_cli.counting.moebius import iter_mu_support, moebius_local
from campana_cli.errors import BoundTooLargeError, InconsistentResultError, PreconditionError
from campana_cli.mfull.numbers import count_m_full, require_squarefree
from campana_cli.toric.cones import check_assumption_L

console = Console(stderr=True)

DEFAULT_WORK_CAP = 10**8


@dataclass(frozen=True)
class _Walk:
    """Everything a worker needs to count one slice of the outer stream."""

    order: tuple[int, ...]
    table: tuple[tuple[int, ...], ...]
    limit: int
    ranges: tuple[int, ...]
    m: tuple[int, ...]
    d: tuple[int, ...]
    complements: tuple[tuple[int, ...], ...]
    coprime: bool
    work_cap: int

    def stream(self, i: int) -> tuple[int, ...]:
        return m_full_stream(self.ranges[i], self.m[i], self.d[i])


def _prepare(
    instance: OrbifoldInstance,
    bound: Bound,
    d_vec: Sequence[int],
    coprime: bool,
    work_cap: int,
) -> Optional[_Walk]:
    if bound < 1:
        return None
    if not check_assumption_L(instance):
        raise PreconditionError("L has no positive coefficient on some ray; the count is infinite")
    ev = HeightEvaluator(instance)
    ranges = ev.search_bounds(bound)
    # coordinates with the fewest candidates are walked first
    order = tuple(sorted(range(ev.s), key=lambda i: (ranges[i] ** (1 / instance.m[i]), i)))
    fan = instance.fan
    return _Walk(
        order=order,
        table=ev.table,
        limit=int(bound_power(bound, ev.t)),
        ranges=ranges,
        m=tuple(instance.m),
        d=tuple(d_vec),
        complements=tuple(fan.complement(sigma) for sigma in fan.max_cones),
        coprime=coprime,
        work_cap=work_cap,
    )


def _inner_limit(walk: _Walk, j: int, products: Sequence[int]) -> int:
    limit = walk.ranges[j]
    for row, prod in zip(walk.table, products):
        if row[j] > 0:
            limit = min(limit, integer_nthroot(walk.limit // prod, row[j])[0])
    return limit


def _obstruction(walk: _Walk, j: int, values: dict[int, int]) -> int:
    """The integer ``G`` with ``y`` coprime iff ``gcd(y_j, G) = 1``; 0 if never coprime."""
    with_j, without_j = 0, 0
    for comp in walk.complements:
        q = math.prod(values[i] for i in comp if i != j)
        if j in comp:
            without_j = math.gcd(without_j, q)
        else:
            with_j = math.gcd(with_j, q)
    if math.gcd(with_j, without_j) > 1:
        return 0
    return with_j


def _count_innermost(walk: _Walk, j: int, limit: int, values: dict[int, int]) -> int:
    if limit < 1:
        return 0
    if not walk.coprime:
        return count_m_full(walk.m[j], limit, walk.d[j])
    G = _obstruction(walk, j, values)
    if G == 0:
        return 0
    stream = walk.stream(j)
    cut = bisect_right(stream, limit)
    if G == 1:
        return cut
    return sum(1 for y in stream[:cut] if math.gcd(y, G) == 1)


def _descend(
    walk: _Walk, depth: int, products: list[int], values: dict[int, int], work: list[int]
) -> int:
    j = walk.order[depth]
    if depth == len(walk.order) - 1:
        return _count_innermost(walk, j, _inner_limit(walk, j, products), values)
    total = 0
    for y in walk.stream(j):
        work[0] += 1
        if work[0] > walk.work_cap:
            raise BoundTooLargeError(f"point count exceeded the work cap {walk.work_cap}")
        nxt = [prod * y ** row[j] for prod, row in zip(products, walk.table)]
        if any(v > walk.limit for v in nxt):
            break
        values[j] = y
        total += _descend(walk, depth + 1, nxt, values, work)
    values.pop(j, None)
    return total


def _count_chunk(args: tuple[_Walk, tuple[int, ...]]) -> int:
    walk, chunk = args
    j = walk.order[0]
    work = [0]
    total = 0
    for y in chunk:
        products = [y ** row[j] for row in walk.table]
        if any(v > walk.limit for v in products):
            break
        total += _descend(walk, 1, products, {j: y}, work)
    return total


def _positive_count(walk: _Walk, workers: int) -> int:
    outer = walk.stream(walk.order[0])
    if len(outer) > walk.work_cap:
        raise BoundTooLargeError(f"outer stream of {len(outer)} values exceeds the work cap")
    if workers <= 1 or len(outer) < 2 * workers:
        return _count_chunk((walk, outer))
    size = -(-len(outer) // workers)
    chunks = [outer[i : i + size] for i in range(0, len(outer), size)]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return sum(executor.map(_count_chunk, [(walk, chunk) for chunk in chunks]))


def count_N(
    instance: OrbifoldInstance,
    bound: Bound,
    work_cap: int = DEFAULT_WORK_CAP,
    workers: int = 1,
    verbose: bool = False,
) -> int:
    """
    Exact ``N(B)``.

    Parameters
    ----------
    instance : OrbifoldInstance
        Fan, orbifold weights and the height divisor.
    bound : int, Fraction or float
        Height bound ``B``.
    work_cap : int
        Largest number of visited outer points.
    workers : int
        Processes sharing the outermost stream.
    verbose : bool
        Print the search ranges.

    Returns
    -------
    int
        ``2^(s-r)`` times the positive coprime count.

    Raises
    ------
    BoundTooLargeError
        If the walk exceeds ``work_cap``.
    """
    fan = instance.fan
    walk = _prepare(instance, bound, (1,) * fan.s, coprime=True, work_cap=work_cap)
    if walk is None:
        return 0
    if verbose:
        console.print(f"[dim]search ranges {walk.ranges}, order {walk.order}[/]")
    return 2 ** (fan.s - fan.r) * _positive_count(walk, workers)


def count_A(
    instance: OrbifoldInstance,
    bound: Bound,
    d_vec: Sequence[int],
    work_cap: int = DEFAULT_WORK_CAP,
    workers: int = 1,
) -> int:
    """Exact ``A(B, d)``: ``2^s`` times the positive m-full count with ``d_i | y_i``."""
    fan = instance.fan
    if len(d_vec) != fan.s:
        raise PreconditionError(f"expected {fan.s} divisors, got {len(d_vec)}")
    for d in d_vec:
        require_squarefree(d)
    walk = _prepare(instance, bound, tuple(d_vec), coprime=False, work_cap=work_cap)
    if walk is None:
        return 0
    return 2**fan.s * _positive_count(walk, workers)


@dataclass
class InversionCheck:
    """``sum_d mu(d) A(B, d)`` against ``2^r N(B)``."""

    lhs: int
    rhs: int
    terms: int

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def moebius_inversion_check(
    instance: OrbifoldInstance, bound: Bound, work_cap: int = DEFAULT_WORK_CAP
) -> InversionCheck:
    """
    Evaluate ``sum_d mu(d) A(B, d)`` over the whole support of ``mu``.

    ``A(B, d)`` vanishes once some ``d_i`` exceeds the search range of ``y_i``,
    so the sum is finite and must equal ``2^r N(B)`` exactly.

    Raises
    ------
    InconsistentResultError
        If the two sides differ.
    """
    fan = instance.fan
    n_value = count_N(instance, bound, work_cap=work_cap)
    if bound < 1:
        return InversionCheck(0, 0, 0)
    ml = moebius_local(fan)
    caps = HeightEvaluator(instance).search_bounds(bound)
    lhs, terms = 0, 0
    for d, mu in iter_mu_support(ml, caps):
        lhs += mu * count_A(instance, bound, d, work_cap=work_cap)
        terms += 1
    check = InversionCheck(lhs=lhs, rhs=2**fan.r * n_value, terms=terms)
    if not check.holds:
        raise InconsistentResultError(
            f"Moebius inversion failed: sum mu(d) A(B,d) = {check.lhs}, 2^r N(B) = {check.rhs}"
        )
    return check
