"""m-full integers: enumeration, exact counts, densities and identities."""

from campana_cli.mfull.constants import (
    Density,
    EulerProduct,
    G_m_eval,
    G_m_series,
    MFullConstants,
    a_m_coefficients,
    c_md,
    constant_C_m,
    constant_K_m,
    euler_factor,
    kappa,
    m_full_constants,
    normalised_error,
    rho,
)
from campana_cli.mfull.identities import (
    box_sum_f,
    verify_forced_prime_identity,
    verify_forced_prime_identity_with_divisor,
)
from campana_cli.mfull.numbers import (
    MFullQuery,
    count_F,
    count_F_naive,
    count_m_full,
    is_m_full,
    is_squarefree,
    iter_m_full,
)

__all__ = [
    # Enumeration and counts
    "MFullQuery",
    "is_m_full",
    "is_squarefree",
    "iter_m_full",
    "count_F",
    "count_F_naive",
    "count_m_full",
    # Constants
    "constant_C_m",
    "kappa",
    "rho",
    "a_m_coefficients",
    "G_m_series",
    "G_m_eval",
    "euler_factor",
    "c_md",
    "constant_K_m",
    "m_full_constants",
    "normalised_error",
    "MFullConstants",
    "EulerProduct",
    "Density",
    # Identities
    "verify_forced_prime_identity",
    "verify_forced_prime_identity_with_divisor",
    "box_sum_f",
]
