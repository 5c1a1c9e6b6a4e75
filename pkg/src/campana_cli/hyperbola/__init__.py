"""Hyperbola-method engine: box coverings, main terms and exact oracles."""

from campana_cli.hyperbola.boxes import (
    BoxConstraintSystem,
    BoxDecomposition,
    box_decomposition,
    box_interval_sum,
    iter_box_indices,
    lattice_counts_r,
)
from campana_cli.hyperbola.engine import (
    HyperbolaEstimate,
    RestrictedConstantCheck,
    demo_setup,
    dirichlet_system,
    exact_S_f,
    hyperbola_main_term,
    ratio_series,
    restricted_constant_sum_check,
)
from campana_cli.hyperbola.functions import (
    MFullFunction,
    PropertyIFunction,
    UnitFunction,
    parse_preset,
)
from campana_cli.hyperbola.geometric import (
    geometric_sum_g,
    geometric_sum_limit_ratio,
    verify_binomial_identity,
    verify_geometric_sum_closed_form,
)

__all__ = [
    # Functions
    "PropertyIFunction",
    "MFullFunction",
    "UnitFunction",
    "parse_preset",
    # Geometric sums
    "geometric_sum_g",
    "verify_geometric_sum_closed_form",
    "verify_binomial_identity",
    "geometric_sum_limit_ratio",
    # Boxes
    "BoxConstraintSystem",
    "BoxDecomposition",
    "iter_box_indices",
    "lattice_counts_r",
    "box_interval_sum",
    "box_decomposition",
    # Main term and oracles
    "HyperbolaEstimate",
    "RestrictedConstantCheck",
    "hyperbola_main_term",
    "exact_S_f",
    "restricted_constant_sum_check",
    "ratio_series",
    "dirichlet_system",
    "demo_setup",
]
