"""Coprimality on the torsor and the Moebius function that inverts it.

A positive vector ``y`` is coprime when ``gcd_sigma prod_{i not in sigma} y_i = 1``.
Prime by prime this asks that ``E_p = {i : p | y_i}`` misses the complement of
some maximal cone. The local table ``mu_loc`` is the Moebius inversion of that
indicator over the Boolean lattice of subsets, and ``mu(d)`` is the product
of local values over the primes dividing ``d``.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from itertools import combinations

import mpmath
from sympy import factorint

from campana_cli.core._cache import primes_upto
from campana_cli.core.models import Fan, OrbifoldInstance
from campana_cli.counting.height import _require_nonzero
from campana_cli.errors import ExplosionGuardError, NonSquarefreeError, PreconditionError
from campana_cli.mfull.constants import euler_factor

# Largest number of rays for which the 2^s table is built
MAX_TABLE_RAYS = 20


def coprime_indicator(instance: OrbifoldInstance, y: Sequence[int]) -> bool:
    """``gcd_sigma prod_{i in Ic(sigma)} |y_i| == 1``."""
    _require_nonzero(y)
    fan = instance.fan
    g = 0
    for sigma in fan.max_cones:
        g = math.gcd(g, math.prod(abs(y[i]) for i in fan.complement(sigma)))
        if g == 1:
            return True
    return g == 1


@dataclass(frozen=True)
class MoebiusLocal:
    """Local Moebius values ``mu_loc(E)`` for every subset ``E`` of the rays."""

    s: int
    complements: tuple[frozenset[int], ...]
    table: dict[frozenset[int], int]

    def indicator(self, E: frozenset[int]) -> int:
        """1 if ``E`` misses the complement of some maximal cone."""
        return int(any(not (E & comp) for comp in self.complements))

    def support(self) -> list[frozenset[int]]:
        """Nonempty subsets with a nonzero local value, in size order."""
        return [E for E, v in self.table.items() if v and E]

    def mu(self, d_vec: Sequence[int]) -> int:
        """
        ``mu(d) = prod_p mu_loc({i : p | d_i})``.

        Raises
        ------
        NonSquarefreeError
            If some ``d_i`` is not squarefree.
        """
        if len(d_vec) != self.s:
            raise PreconditionError(f"expected {self.s} entries, got {len(d_vec)}")
        by_prime: dict[int, set[int]] = {}
        for i, d in enumerate(d_vec):
            if d < 1:
                raise NonSquarefreeError(d)
            for p, e in (factorint(d) if d > 1 else {}).items():
                if e > 1:
                    raise NonSquarefreeError(d)
                by_prime.setdefault(p, set()).add(i)
        out = 1
        for members in by_prime.values():
            out *= self.table[frozenset(members)]
            if out == 0:
                return 0
        return out

    def to_dict(self) -> dict[str, int]:
        return {
            "{" + ",".join(str(i + 1) for i in sorted(E)) + "}": v
            for E, v in sorted(self.table.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
            if v
        }


def moebius_local(fan: Fan) -> MoebiusLocal:
    """Invert the coprimality indicator over the subsets of ``{0, ..., s-1}``."""
    s = fan.s
    if s > MAX_TABLE_RAYS:
        raise ExplosionGuardError(f"Moebius table for {s} rays has 2^{s} entries")
    complements = tuple(frozenset(fan.complement(sigma)) for sigma in fan.max_cones)

    def ind(E: frozenset[int]) -> int:
        return int(any(not (E & comp) for comp in complements))

    subsets = [frozenset(c) for size in range(s + 1) for c in combinations(range(s), size)]
    table: dict[frozenset[int], int] = {}
    for E in subsets:
        table[E] = sum(
            (-1) ** (len(E) - size) * ind(frozenset(sub))
            for size in range(len(E) + 1)
            for sub in combinations(sorted(E), size)
        )
    return MoebiusLocal(s=s, complements=complements, table=table)


def local_euler_factor(ml: MoebiusLocal, m_vec: Sequence[int], p: int) -> mpmath.mpf:
    """``sum_E mu_loc(E) prod_{i in E} euler_factor(m_i, p)``."""
    factors = [euler_factor(m, p) for m in m_vec]
    total = mpmath.mpf(0)
    for E, v in ml.table.items():
        if v:
            total += v * mpmath.fprod(factors[i] for i in E)
    return total


def iter_mu_support(
    ml: MoebiusLocal, caps: Sequence[int], guard: int = 10**6
) -> Iterator[tuple[tuple[int, ...], int]]:
    """
    All ``(d, mu(d))`` with ``mu(d) != 0`` and ``d_i <= caps[i]``.

    Each prime ``p <= max(caps)`` is assigned a subset ``E`` from the support of
    ``mu_loc`` (or none), multiplying ``p`` into ``d_i`` for ``i`` in ``E``.
    """
    support = ml.support()
    primes = primes_upto(max(caps)) if caps and max(caps) >= 2 else ()
    emitted = 0

    def walk(start: int, d: list[int], sign: int) -> Iterator[tuple[tuple[int, ...], int]]:
        nonlocal emitted
        emitted += 1
        if emitted > guard:
            raise ExplosionGuardError(f"more than {guard} Moebius support vectors")
        yield tuple(d), sign
        for k in range(start, len(primes)):
            p = primes[k]
            fitting = [E for E in support if all(d[i] * p <= caps[i] for i in E)]
            if not fitting:
                break
            for E in fitting:
                nxt = list(d)
                for i in E:
                    nxt[i] *= p
                yield from walk(k + 1, nxt, sign * ml.table[E])

    yield from walk(0, [1] * ml.s, 1)
