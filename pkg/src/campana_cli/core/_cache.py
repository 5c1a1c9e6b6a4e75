"""Caching layer for prime tables and m-full streams.

Exact counts re-use the same sorted streams of m-full integers many times.
They are cached here with ``lru_cache`` so repeated queries in one process
share the enumeration.
"""

from functools import lru_cache

from sympy import primerange

# Largest stream bound ``B^(1/m)`` an m-full enumeration may use (set via config)
_stream_cap: int = 10**7


def set_stream_cap(cap: int) -> None:
    """Set the maximal ``B^(1/m)`` for m-full streams."""
    global _stream_cap
    _stream_cap = int(cap)


def get_stream_cap() -> int:
    return _stream_cap


@lru_cache(maxsize=16)
def primes_upto(bound: int) -> tuple[int, ...]:
    """All primes ``p <= bound``."""
    return tuple(primerange(2, bound + 1))


@lru_cache(maxsize=64)
def m_full_stream(bound: int, m: int, d: int = 1) -> tuple[int, ...]:
    """Sorted tuple of m-full integers ``y <= bound`` divisible by ``d``.

    Parameters
    ----------
    bound : int
        Inclusive upper bound.
    m : int
        Fullness exponent.
    d : int
        Squarefree modulus.

    Returns
    -------
    tuple of int
        Cached sorted stream.
    """
    from campana_cli.mfull.numbers import iter_m_full

    return tuple(sorted(iter_m_full(bound, m, d)))


def clear_caches() -> None:
    """Clear all cached tables. Useful for testing."""
    primes_upto.cache_clear()
    m_full_stream.cache_clear()
