"""Exact linear algebra over the rationals.

Vectors and matrices are ``Fraction`` tuples and lists of rows; the
elimination work is done by sympy ``Matrix`` over its exact rationals.
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction
from typing import Optional

from sympy import Matrix, Rational

Vector = tuple[Fraction, ...]
Rows = Sequence[Sequence[Fraction | int]]


def _to_sympy(rows: Rows) -> Matrix:
    return Matrix([[Rational(Fraction(v).numerator, Fraction(v).denominator) for v in row] for row in rows])


def _to_fraction(x) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def as_matrix(rows: Rows) -> list[list[Fraction]]:
    return [[Fraction(v) for v in row] for row in rows]


def dot(u: Sequence[Fraction | int], v: Sequence[Fraction | int]) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


def row_echelon(rows: Rows) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    if not rows or not rows[0]:
        return as_matrix(rows), []
    R, pivots = _to_sympy(rows).rref()
    return [[_to_fraction(R[i, j]) for j in range(R.cols)] for i in range(R.rows)], list(pivots)


def rank(rows: Rows) -> int:
    if not rows or not rows[0]:
        return 0
    return _to_sympy(rows).rank()


def independent_rows(rows: Rows) -> list[int]:
    """Indices of a maximal linearly independent subset, chosen greedily in order."""
    if not rows or not rows[0]:
        return []
    # pivot columns of the transpose are the first independent rows
    _, pivots = _to_sympy(rows).T.rref()
    return list(pivots)


def solve(A: Rows, b: Sequence[Fraction | int]) -> Optional[Vector]:
    """Unique solution of the square system ``A x = b``, or ``None`` if singular."""
    n = len(A)
    if n == 0:
        return ()
    M = _to_sympy(A)
    if M.rank() < n:
        return None
    x = M.LUsolve(_to_sympy([[v] for v in b]))
    return tuple(_to_fraction(x[i, 0]) for i in range(n))


def det(A: Rows) -> Fraction:
    if not A:
        return Fraction(1)
    return _to_fraction(_to_sympy(A).det())


def nullspace_vector(rows: Rows, ncols: int) -> Optional[Vector]:
    """A nonzero vector ``v`` with ``row . v = 0`` for every row, if one exists."""
    if ncols == 0:
        return None
    if not rows:
        return tuple(Fraction(int(c == 0)) for c in range(ncols))
    basis = _to_sympy(rows).nullspace()
    if not basis:
        return None
    return tuple(_to_fraction(basis[0][c, 0]) for c in range(ncols))


def affine_rank(points: Sequence[Sequence[Fraction]]) -> int:
    """Dimension of the affine hull of a nonempty point set."""
    if not points:
        return -1
    base = points[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in points[1:]]
    return rank(diffs) if diffs else 0
