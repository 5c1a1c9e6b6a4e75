"""Rational polytopes in H-representation."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from campana_cli.polytope.linalg import Vector, dot, rank
from campana_cli.polytope.simplex import OPTIMAL, UNBOUNDED, solve_lp
from campana_cli.polytope.vertices import vertex_enumeration

Row = tuple[Vector, Fraction]


def _normalise(a: Sequence[Fraction | int], b: Fraction | int, equality: bool) -> Row | None:
    """Scale a row by its first nonzero coefficient; drop trivially true rows."""
    coeffs = tuple(Fraction(v) for v in a)
    rhs = Fraction(b)
    lead = next((v for v in coeffs if v != 0), None)
    if lead is None:
        if (equality and rhs == 0) or (not equality and rhs >= 0):
            return None
        return coeffs, Fraction(-1)
    scale = lead if equality else abs(lead)
    return tuple(v / scale for v in coeffs), rhs / scale


def _dedupe(rows: Iterable[Row]) -> tuple[Row, ...]:
    seen: dict[Row, None] = {}
    for row in rows:
        seen.setdefault(row, None)
    return tuple(seen)


@dataclass(frozen=True, init=False)
class RationalPolytope:
    """The set ``{t : a.t <= b for each inequality, e.t = f for each equality}``.

    Rows are normalised on construction: each is divided by the absolute value
    of its first nonzero coefficient (equalities by the coefficient itself) and
    duplicates are removed. A trivially false row ``0 <= -1`` is kept so the
    polytope stays empty.
    """

    ambient_dim: int
    inequalities: tuple[Row, ...] = ()
    equalities: tuple[Row, ...] = ()

    def __init__(
        self,
        ambient_dim: int,
        inequalities: Iterable[tuple[Sequence[Fraction | int], Fraction | int]] = (),
        equalities: Iterable[tuple[Sequence[Fraction | int], Fraction | int]] = (),
    ) -> None:
        ineq = [_normalise(a, b, False) for a, b in inequalities]
        eq = [_normalise(a, b, True) for a, b in equalities]
        for a, _ in [r for r in ineq + eq if r is not None]:
            if len(a) != ambient_dim:
                raise ValueError(f"row of length {len(a)} in dimension {ambient_dim}")
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "inequalities", _dedupe(r for r in ineq if r is not None))
        object.__setattr__(self, "equalities", _dedupe(r for r in eq if r is not None))

    @classmethod
    def nonnegative_orthant(cls, dim: int) -> list[Row]:
        """Rows ``-t_i <= 0``."""
        return [
            (tuple(Fraction(-int(i == j)) for j in range(dim)), Fraction(0)) for i in range(dim)
        ]

    def contains(self, t: Sequence[Fraction | int]) -> bool:
        return all(dot(a, t) <= b for a, b in self.inequalities) and all(
            dot(e, t) == f for e, f in self.equalities
        )

    def with_equalities(
        self, rows: Iterable[tuple[Sequence[Fraction | int], Fraction | int]]
    ) -> RationalPolytope:
        """Intersection with additional hyperplanes."""
        return RationalPolytope(
            self.ambient_dim, self.inequalities, list(self.equalities) + list(rows)
        )

    def with_inequalities(
        self, rows: Iterable[tuple[Sequence[Fraction | int], Fraction | int]]
    ) -> RationalPolytope:
        return RationalPolytope(
            self.ambient_dim, list(self.inequalities) + list(rows), self.equalities
        )

    def fix_coordinates(self, values: dict[int, Fraction]) -> RationalPolytope:
        """Intersection with ``{t_i = values[i]}``."""
        rows = [
            (tuple(Fraction(int(i == j)) for j in range(self.ambient_dim)), Fraction(v))
            for i, v in values.items()
        ]
        return self.with_equalities(rows)

    def scaled(self, factor: Fraction | int) -> RationalPolytope:
        """The dilate ``factor * P`` for ``factor > 0``."""
        lam = Fraction(factor)
        if lam <= 0:
            raise ValueError("scaling factor must be positive")
        return RationalPolytope(
            self.ambient_dim,
            [(a, b * lam) for a, b in self.inequalities],
            [(e, f * lam) for e, f in self.equalities],
        )

    def is_feasible(self) -> bool:
        zero = tuple(Fraction(0) for _ in range(self.ambient_dim))
        res = solve_lp(self.ambient_dim, self.inequalities, self.equalities, zero)
        return res.status == OPTIMAL

    def is_bounded(self) -> bool:
        """Whether every coordinate is bounded above and below (empty sets are bounded)."""
        if not self.is_feasible():
            return True
        for i in range(self.ambient_dim):
            for sign in (1, -1):
                c = tuple(Fraction(sign * int(i == j)) for j in range(self.ambient_dim))
                res = solve_lp(self.ambient_dim, self.inequalities, self.equalities, c)
                if res.status == UNBOUNDED:
                    return False
        return True

    def implicit_equalities(self) -> list[int]:
        """Indices of inequalities that hold with equality on all of ``P``."""
        out = []
        for k, (a, b) in enumerate(self.inequalities):
            res = solve_lp(
                self.ambient_dim,
                self.inequalities,
                self.equalities,
                tuple(-v for v in a),
            )
            if res.status == OPTIMAL and res.value == -b:
                out.append(k)
        return out

    def dimension(self) -> int:
        """Dimension of the affine hull, or -1 for the empty set."""
        if not self.is_feasible():
            return -1
        rows = [e for e, _ in self.equalities]
        rows += [self.inequalities[k][0] for k in self.implicit_equalities()]
        return self.ambient_dim - rank(rows)

    def vertices(self) -> list[Vector]:
        return vertex_enumeration(self)

    def __repr__(self) -> str:
        return (
            f"RationalPolytope(dim={self.ambient_dim}, "
            f"{len(self.inequalities)} inequalities, {len(self.equalities)} equalities)"
        )
