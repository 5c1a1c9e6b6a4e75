"""Monomial constraint systems and their covering by dyadic-style boxes.

A system ``prod_i y_i^alpha_{ik} <= B^b_k`` (``k`` in ``K``) is covered by boxes
``y_i in [theta_i^l_i, theta_i^(l_i+1))`` with ``theta_i = theta^(1/varpi_i)``.
Boxes meeting the region form ``L+``; boxes inside it (after the extra
``C5`` shift) form ``L-``.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional, Union

import mpmath
from rich.console import Console

from campana_cli.core.rationals import lcm_of_denominators, to_fraction, to_mpf
from campana_cli.errors import (
    ExplosionGuardError,
    InconsistentResultError,
    InvalidSystemError,
    PreconditionError,
    UnboundedPolytopeError,
)
from campana_cli.polytope.rational import RationalPolytope, Row

console = Console(stderr=True)

PLUS = "plus"
MINUS = "minus"

DEFAULT_THETA = Fraction(3, 2)
DEFAULT_LATTICE_CAP = 2_000_000

Theta = Union[Fraction, float]


@dataclass(frozen=True)
class BoxConstraintSystem:
    """
    Constraints ``prod_i y_i^alpha[k][i] <= B^b[k]``.

    Parameters
    ----------
    alpha : tuple of tuple of Fraction
        One non-negative, nonzero row per constraint.
    b : tuple of Fraction
        Exponents ``log B_k / log B``, each in ``[C3, C4]``.
    C3, C4 : Fraction
        Admissible range of the exponents.
    """

    alpha: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    C3: Fraction = Fraction(1, 100)
    C4: Fraction = Fraction(100)

    def __post_init__(self) -> None:
        if len(self.alpha) != len(self.b):
            raise InvalidSystemError("alpha and b have different numbers of rows")
        widths = {len(row) for row in self.alpha}
        if len(widths) > 1:
            raise InvalidSystemError("alpha rows differ in length")
        for k, row in enumerate(self.alpha):
            if any(v < 0 for v in row):
                raise InvalidSystemError(f"row {k + 1} of alpha has a negative entry")
            if all(v == 0 for v in row):
                raise InvalidSystemError(f"row {k + 1} of alpha is zero")
        for k, bk in enumerate(self.b):
            if not self.C3 <= bk <= self.C4:
                raise InvalidSystemError(
                    f"b_{k + 1}={bk} outside [{self.C3}, {self.C4}]"
                )

    @classmethod
    def from_rows(
        cls,
        alpha: Sequence[Sequence[Union[int, str, Fraction]]],
        b: Optional[Sequence[Union[int, str, Fraction]]] = None,
        C3: Union[int, str, Fraction] = Fraction(1, 100),
        C4: Union[int, str, Fraction] = 100,
    ) -> BoxConstraintSystem:
        rows = tuple(tuple(to_fraction(v) for v in row) for row in alpha)
        exps = tuple(to_fraction(v) for v in b) if b is not None else (Fraction(1),) * len(rows)
        return cls(rows, exps, to_fraction(C3), to_fraction(C4))

    @property
    def n_constraints(self) -> int:
        return len(self.alpha)

    def scaled_rows(self, varpi: Sequence[Fraction]) -> list[tuple[Fraction, ...]]:
        """Rows ``alpha_{ik} / varpi_i``."""
        s = len(varpi)
        for row in self.alpha:
            if len(row) != s:
                raise InvalidSystemError(f"alpha rows have {len(row)} entries, f has arity {s}")
        return [tuple(a / w for a, w in zip(row, varpi)) for row in self.alpha]

    def polytope(self, varpi: Sequence[Fraction]) -> RationalPolytope:
        """``{t >= 0 : sum_i alpha_{ik} t_i / varpi_i <= b_k}``.

        Raises
        ------
        UnboundedPolytopeError
            If some variable occurs in no constraint.
        """
        s = len(varpi)
        scaled = self.scaled_rows(varpi)
        for i in range(s):
            if not any(row[i] > 0 for row in scaled):
                raise UnboundedPolytopeError(f"variable {i + 1} occurs in no constraint")
        rows: list[Row] = list(RationalPolytope.nonnegative_orthant(s))
        rows += [(row, bk) for row, bk in zip(scaled, self.b)]
        return RationalPolytope(s, rows)

    def default_C5(self, varpi: Sequence[Fraction]) -> Fraction:
        """``max_k sum_i alpha_{ik} varpi_i^-1 / b_k``."""
        return max(sum(row, Fraction(0)) / bk for row, bk in zip(self.scaled_rows(varpi), self.b))

    def contains(self, y: Sequence[int], bound: int) -> bool:
        """Exact test of ``prod y_i^alpha_{ik} <= B^b_k`` for every ``k``."""
        for row, bk in zip(self.alpha, self.b):
            q = lcm_of_denominators(list(row) + [bk])
            lhs = 1
            for v, a in zip(y, row):
                lhs *= v ** int(a * q)
            if lhs > bound ** int(bk * q):
                return False
        return True


def _theta_power_le(theta: Theta, x: Fraction, bound: int, bk: Fraction) -> bool:
    """``theta^x <= bound^bk`` for ``theta > 1``; exact when ``theta`` is rational."""
    if isinstance(theta, Fraction):
        q = lcm_of_denominators([x, bk])
        return theta ** int(x * q) <= Fraction(bound) ** int(bk * q)
    return float(x) * math.log(theta) <= float(bk) * math.log(bound)


def _lower_cutoffs(varpi: Sequence[Fraction], theta: Theta, A_tilde: float, bound: int) -> list[float]:
    if A_tilde == 0:
        return [0.0] * len(varpi)
    loglog = math.log(math.log(bound))
    return [float(w) * A_tilde * loglog / math.log(float(theta)) for w in varpi]


def iter_box_indices(
    system: BoxConstraintSystem,
    varpi: Sequence[Fraction],
    theta: Theta,
    A_tilde: float,
    side: str,
    bound: int,
    C5: Optional[Fraction] = None,
    lattice_cap: int = DEFAULT_LATTICE_CAP,
) -> Iterator[tuple[int, ...]]:
    """
    Enumerate the box indices of ``L+`` (``side="plus"``) or ``L-`` (``side="minus"``).

    Raises
    ------
    ExplosionGuardError
        If more than ``lattice_cap`` candidate vectors are visited.
    """
    if side not in (PLUS, MINUS):
        raise PreconditionError(f"side must be '{PLUS}' or '{MINUS}', got '{side}'")
    if not 1 < theta < 2:
        raise PreconditionError(f"theta must lie in (1, 2), got {theta}")
    if bound < 2:
        raise PreconditionError("the box covering needs B >= 2")
    s = len(varpi)
    scaled = system.scaled_rows(varpi)
    shift = (C5 if C5 is not None else system.default_C5(varpi)) if side == MINUS else Fraction(0)
    cut = _lower_cutoffs(varpi, theta, A_tilde, bound)
    visited = 0

    def fits(partial: list[int], extra: Fraction = Fraction(0)) -> bool:
        for row, bk in zip(scaled, system.b):
            x = sum((a * v for a, v in zip(row, partial)), Fraction(0))
            if not _theta_power_le(theta, x + extra * bk, bound, bk):
                return False
        return True

    def whole_box(vec: list[int]) -> bool:
        for row, bk in zip(scaled, system.b):
            x = sum((a * (v + 1) for a, v in zip(row, vec)), Fraction(0))
            if not _theta_power_le(theta, x, bound, bk):
                return False
        return True

    def below_cut(i: int, li: int) -> bool:
        return (li + 1 < cut[i]) if side == PLUS else (li < cut[i])

    def walk(prefix: list[int]) -> Iterator[tuple[int, ...]]:
        nonlocal visited
        i = len(prefix)
        if i == s:
            if side == MINUS and not whole_box(prefix):
                return
            yield tuple(prefix)
            return
        li = 0
        while True:
            visited += 1
            if visited > lattice_cap:
                raise ExplosionGuardError(
                    f"box enumeration exceeded the lattice cap {lattice_cap}; increase theta"
                )
            candidate = prefix + [li] + [0] * (s - i - 1)
            if not fits(candidate, shift):
                break
            if not below_cut(i, li):
                yield from walk(prefix + [li])
            li += 1

    # every variable must occur in some row for the walk to terminate
    system.polytope(varpi)
    yield from walk([])


def lattice_counts_r(
    system: BoxConstraintSystem,
    varpi: Sequence[Fraction],
    theta: Theta,
    A_tilde: float,
    side: str,
    bound: int,
    C5: Optional[Fraction] = None,
    lattice_cap: int = DEFAULT_LATTICE_CAP,
) -> dict[int, int]:
    """
    ``l -> r±(l)``, the number of box indices in ``L±`` with ``sum_i l_i = l``.

    Parameters
    ----------
    system : BoxConstraintSystem
        The constraints.
    varpi : sequence of Fraction
        Box exponents of the function being summed.
    theta : Fraction or float
        Box ratio in ``(1, 2)``; a ``Fraction`` makes every comparison exact.
    A_tilde : float
        Exponent of the ``(log B)^A_tilde`` lower cutoff; 0 disables it.
    side : str
        ``"plus"`` or ``"minus"``.
    bound : int
        The height bound ``B``.
    C5 : Fraction, optional
        Shift of the ``L-`` constraints; defaults to :meth:`BoxConstraintSystem.default_C5`.
    lattice_cap : int
        Maximum number of visited candidates.

    Returns
    -------
    dict
        Sorted map from ``l`` to the count.
    """
    counts = Counter(
        sum(vec)
        for vec in iter_box_indices(system, varpi, theta, A_tilde, side, bound, C5, lattice_cap)
    )
    return dict(sorted(counts.items()))


def _box_edges(theta: Theta, inv_varpi: Fraction, li: int) -> tuple[int, int]:
    """Integer range ``[lo, hi)`` of ``y`` in ``[theta^(l/varpi), theta^((l+1)/varpi))``."""
    if isinstance(theta, Fraction) and inv_varpi.denominator == 1:
        e = int(inv_varpi)
        return math.ceil(theta ** (li * e)), math.ceil(theta ** ((li + 1) * e))
    if isinstance(theta, Fraction):
        raise PreconditionError("exact boxes need integral 1/varpi_i")
    lo = float(theta) ** (float(inv_varpi) * li)
    hi = float(theta) ** (float(inv_varpi) * (li + 1))
    return math.ceil(lo), math.ceil(hi)


def box_interval_sum(f, ranges: Sequence[tuple[int, int]]) -> int:
    """``sum f(y)`` over ``lo_i <= y_i < hi_i`` by inclusion-exclusion of box sums."""
    total = 0
    for corner in product((0, 1), repeat=len(ranges)):
        bounds = [(hi - 1) if c == 0 else (lo - 1) for c, (lo, hi) in zip(corner, ranges)]
        if any(v < 1 for v in bounds):
            continue
        sign = -1 if sum(corner) % 2 else 1
        total += sign * f.box_sum(bounds)
    return total


@dataclass
class BoxDecomposition:
    """Sandwich ``S- <= S <= S+`` and the box main terms."""

    bound: int
    theta: Theta
    A_tilde: float
    s_minus: int
    s_plus: int
    s_exact: Optional[int]
    main_minus: float
    main_plus: float
    r_minus: dict[int, int]
    r_plus: dict[int, int]
    warnings: list[str] = field(default_factory=list)

    @property
    def sandwich_holds(self) -> Optional[bool]:
        if self.s_exact is None:
            return None
        return self.s_minus <= self.s_exact <= self.s_plus


def box_decomposition(
    f,
    system: BoxConstraintSystem,
    bound: int,
    theta: Theta = DEFAULT_THETA,
    A_tilde: float = 0,
    lattice_cap: int = DEFAULT_LATTICE_CAP,
    work_cap: int = 10**8,
    verbose: bool = False,
) -> BoxDecomposition:
    """
    Cover the region by boxes and compare the box sums with the exact sum.

    ``S±`` are the exact box sums over ``L±``. ``M± = (theta-1)^s C_M sum_l r±(l) theta^l``
    are their main terms. The exact sum ``S`` is computed only for
    ``A_tilde = 0``, where the sandwich ``S- <= S <= S+`` must hold.

    Raises
    ------
    InconsistentResultError
        If the sandwich fails.
    """
    from campana_cli.hyperbola.engine import exact_S_f

    varpi = f.varpi
    inv = [1 / w for w in varpi]
    sums: dict[str, int] = {}
    counts: dict[str, dict[int, int]] = {}
    for side in (MINUS, PLUS):
        total = 0
        tally: Counter[int] = Counter()
        for vec in iter_box_indices(system, varpi, theta, A_tilde, side, bound, lattice_cap=lattice_cap):
            tally[sum(vec)] += 1
            ranges = [_box_edges(theta, iv, li) for iv, li in zip(inv, vec)]
            total += box_interval_sum(f, ranges)
        sums[side] = total
        counts[side] = dict(sorted(tally.items()))
        if verbose:
            console.print(f"[dim]{side}: {sum(tally.values())} boxes, sum {total}[/]")

    th = to_mpf(theta)
    scale = (th - 1) ** f.arity * f.C_M

    def main(tally: dict[int, int]) -> float:
        return float(scale * mpmath.fsum(c * th**l for l, c in tally.items()))  # noqa: E741

    s_exact = exact_S_f(f, system, bound, work_cap=work_cap) if A_tilde == 0 else None
    result = BoxDecomposition(
        bound=bound,
        theta=theta,
        A_tilde=A_tilde,
        s_minus=sums[MINUS],
        s_plus=sums[PLUS],
        s_exact=s_exact,
        main_minus=main(counts[MINUS]),
        main_plus=main(counts[PLUS]),
        r_minus=counts[MINUS],
        r_plus=counts[PLUS],
    )
    if result.sandwich_holds is False:
        raise InconsistentResultError(
            f"box sandwich failed: S-={result.s_minus}, S={s_exact}, S+={result.s_plus}"
        )
    return result
