"""Cone combinatorics of smooth complete toric varieties.

For a maximal cone ``sigma`` with rays ``n_j`` the dual vectors ``u_j`` form
the dual basis of ``M``. Every divisor ``D = sum c_i D_i`` is linearly
equivalent to ``D(sigma) = D - div(u_{sigma,D})`` which is supported on the
rays outside ``sigma``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from sympy import Matrix

from campana_cli.core.models import ConeData, Fan, OrbifoldInstance
from campana_cli.errors import NonSmoothConeError


def generator_matrix(fan: Fan, sigma: tuple[int, ...]) -> Matrix:
    """Integer matrix whose rows are the rays of ``sigma``."""
    return Matrix([list(fan.rays[i]) for i in sigma])


@lru_cache(maxsize=512)
def dual_basis(fan: Fan, sigma: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Dual vectors ``u_j`` (``j`` in ``sigma``, in order) with ``u_j(n_l) = delta_jl``."""
    G = generator_matrix(fan, sigma)
    det = int(G.det())
    if abs(det) != 1:
        raise NonSmoothConeError(sigma, det)
    U = G.T.inv()
    return tuple(tuple(int(U[k, c]) for c in range(fan.dim)) for k in range(len(sigma)))


def _pair(u: tuple[int, ...] | tuple[Fraction, ...], v: tuple[int, ...]) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


def u_of_divisor(
    fan: Fan, sigma: tuple[int, ...], coeffs: tuple[Fraction, ...]
) -> tuple[Fraction, ...]:
    """The vector ``u_{sigma,D}`` matching ``D`` on the rays of ``sigma``."""
    basis = dual_basis(fan, sigma)
    out = [Fraction(0)] * fan.dim
    for k, j in enumerate(sigma):
        for c in range(fan.dim):
            out[c] += Fraction(coeffs[j]) * basis[k][c]
    return tuple(out)


def divisor_class(
    instance: OrbifoldInstance, sigma: tuple[int, ...], coeffs: tuple[Fraction, ...]
) -> dict[int, Fraction]:
    """Coefficients of ``D(sigma)`` on the rays outside ``sigma``.

    These are the coordinates of ``[D]`` in the basis ``{[D_i] : i not in sigma}``
    of the Picard group.
    """
    fan = instance.fan
    u = u_of_divisor(fan, sigma, coeffs)
    return {i: Fraction(coeffs[i]) - _pair(u, fan.rays[i]) for i in fan.complement(sigma)}


def cone_data(instance: OrbifoldInstance, sigma: tuple[int, ...]) -> ConeData:
    """
    Compute the dual basis, ``beta`` and ``alpha`` for one maximal cone.

    Parameters
    ----------
    instance : OrbifoldInstance
        Instance whose fan contains ``sigma``.
    sigma : tuple of int
        Sorted 0-indexed ray labels of a maximal cone.

    Returns
    -------
    ConeData
        ``beta[i][j] = -u_j(n_i)`` for ``j`` in ``sigma`` and 0 otherwise;
        ``alpha[i]`` is the coefficient of ``D_i`` in ``L(sigma)``.
    """
    fan = instance.fan
    basis = dual_basis(fan, sigma)
    s = fan.s
    beta = [[0] * s for _ in range(s)]
    for i in range(s):
        for k, j in enumerate(sigma):
            beta[i][j] = -sum(a * b for a, b in zip(basis[k], fan.rays[i]))

    u_L = u_of_divisor(fan, sigma, instance.coeffs)
    alpha = tuple(Fraction(instance.coeffs[i]) - _pair(u_L, fan.rays[i]) for i in range(s))
    return ConeData(
        sigma=sigma,
        complement=fan.complement(sigma),
        dual_basis=basis,
        beta=tuple(tuple(row) for row in beta),
        alpha=alpha,
        u_L=u_L,
    )


def all_cone_data(instance: OrbifoldInstance) -> list[ConeData]:
    return [cone_data(instance, sigma) for sigma in instance.fan.max_cones]


def check_beta_relation(
    instance: OrbifoldInstance, sigma: tuple[int, ...], sigma_prime: tuple[int, ...]
) -> bool:
    """Check ``beta_sigma[i][j] = -sum_l beta_sigma'[i][l] beta_sigma[l][j]`` for all i, j.

    The sum runs over the rays ``l`` of ``sigma_prime``.
    """
    a = cone_data(instance, sigma)
    b = cone_data(instance, sigma_prime)
    s = instance.fan.s
    for i in range(s):
        for j in range(s):
            rhs = -sum(b.beta[i][l] * a.beta[l][j] for l in sigma_prime)
            if a.beta[i][j] != rhs:
                return False
    return True


def check_assumption_L(instance: OrbifoldInstance) -> bool:
    """Every ray has some cone in which ``L(sigma)`` has a positive coefficient on it."""
    data = all_cone_data(instance)
    return all(any(cd.alpha[i] > 0 for cd in data) for i in range(instance.fan.s))


def is_ample(instance: OrbifoldInstance) -> bool:
    """All coefficients of every ``L(sigma)`` off ``sigma`` are positive."""
    return all(
        cd.alpha[i] > 0 for cd in all_cone_data(instance) for i in cd.complement
    )


def is_effective(instance: OrbifoldInstance) -> bool:
    """Whether L is linearly equivalent to an effective divisor.

    Equivalently the polytope ``{u : u(n_i) >= -L_i}`` in ``M_Q`` is nonempty.
    """
    from campana_cli.polytope.rational import RationalPolytope

    fan = instance.fan
    rows = [
        (tuple(Fraction(-c) for c in fan.rays[i]), Fraction(instance.coeffs[i]))
        for i in range(fan.s)
    ]
    return RationalPolytope(fan.dim, rows).is_feasible()


def picard_rank(fan: Fan) -> int:
    return fan.r
