"""Cone combinatorics: dual bases, beta and alpha coefficients, ampleness."""

from campana_cli.toric.cones import (
    all_cone_data,
    check_assumption_L,
    check_beta_relation,
    cone_data,
    divisor_class,
    dual_basis,
    is_ample,
    is_effective,
    picard_rank,
    u_of_divisor,
)

__all__ = [
    "cone_data",
    "all_cone_data",
    "dual_basis",
    "u_of_divisor",
    "divisor_class",
    "check_beta_relation",
    "check_assumption_L",
    "is_ample",
    "is_effective",
    "picard_rank",
]
