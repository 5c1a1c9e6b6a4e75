"""Enumeration and exact counts of m-full integers.

An integer ``y >= 1`` is m-full if ``p^m`` divides ``y`` for every prime ``p``
dividing ``y``. ``F_m(B, d)`` counts the m-full ``y <= B`` with ``d | y``.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass

from sympy import factorint, integer_nthroot

from campana_cli.core._cache import get_stream_cap, primes_upto
from campana_cli.errors import BoundTooLargeError, NonSquarefreeError, PreconditionError


def is_squarefree(d: int) -> bool:
    return d >= 1 and all(e == 1 for e in factorint(d).values())


def require_squarefree(d: int) -> None:
    if not is_squarefree(d):
        raise NonSquarefreeError(d)


@dataclass(frozen=True)
class MFullQuery:
    """A count ``F_m(B, d)``."""

    m: int
    bound: int
    d: int = 1

    def __post_init__(self) -> None:
        if self.m < 1:
            raise PreconditionError(f"m must be positive, got {self.m}")
        if self.bound < 0:
            raise PreconditionError(f"bound must be non-negative, got {self.bound}")
        require_squarefree(self.d)


def is_m_full(y: int, m: int) -> bool:
    """Every prime valuation of ``y`` is 0 or at least ``m``."""
    if y < 1:
        raise PreconditionError(f"y must be positive, got {y}")
    if m <= 1:
        return True
    return all(e >= m for e in factorint(y).values())


def _coprime_m_full(bound: int, m: int, primes: tuple[int, ...], exclude: frozenset[int]) -> Iterator[int]:
    """Depth-first generation of m-full integers ``<= bound`` with no prime factor in ``exclude``."""
    stack = [(1, 0)]
    while stack:
        value, start = stack.pop()
        yield value
        for j in range(start, len(primes)):
            p = primes[j]
            if p in exclude:
                continue
            v = value * p**m
            if v > bound:
                break
            while v <= bound:
                stack.append((v, j + 1))
                v *= p


def iter_m_full(bound: int, m: int, d: int = 1) -> Iterator[int]:
    """
    Generate the m-full integers ``y <= bound`` divisible by ``d`` (unordered).

    Parameters
    ----------
    bound : int
        Inclusive bound.
    m : int
        Fullness exponent; ``m = 1`` gives all multiples of ``d``.
    d : int
        Squarefree modulus. Each prime of ``d`` is forced with exponent at least ``m``.
    """
    require_squarefree(d)
    if bound < 1:
        return
    if m == 1:
        yield from range(d, bound + 1, d)
        return

    forced = sorted(factorint(d)) if d > 1 else []
    heads = [1]
    for p in forced:
        nxt = []
        for h in heads:
            v = h * p**m
            while v <= bound:
                nxt.append(v)
                v *= p
        heads = nxt
    if not heads:
        return
    root = integer_nthroot(bound // min(heads), m)[0]
    primes = primes_upto(root)
    exclude = frozenset(forced)
    for h in heads:
        yield from (h * w for w in _coprime_m_full(bound // h, m, primes, exclude))


def _check_cap(query: MFullQuery) -> None:
    if query.m >= 2 and integer_nthroot(query.bound, query.m)[0] > get_stream_cap():
        raise BoundTooLargeError(
            f"B^(1/m) for m={query.m}, B={query.bound} exceeds the stream cap {get_stream_cap()}"
        )


def count_F(query: MFullQuery) -> int:
    """Exact ``F_m(B, d)`` by generation (``B // d`` for ``m = 1``).

    Raises
    ------
    BoundTooLargeError
        If ``B^(1/m)`` exceeds the configured stream cap.
    """
    if query.m == 1:
        return query.bound // query.d
    _check_cap(query)
    return sum(1 for _ in iter_m_full(query.bound, query.m, query.d))


def count_m_full(m: int, bound: int, d: int = 1) -> int:
    """Shorthand for ``count_F(MFullQuery(m, bound, d))``; negative bounds count 0."""
    if bound < 1:
        return 0
    return count_F(MFullQuery(m, bound, d))


def count_F_naive(query: MFullQuery) -> int:
    """Valuation scan over the multiples of ``d``; only for small bounds."""
    return sum(1 for y in range(query.d, query.bound + 1, query.d) if is_m_full(y, query.m))


def omega(d: int) -> int:
    """Number of distinct prime factors."""
    return len(factorint(d)) if d > 1 else 0
