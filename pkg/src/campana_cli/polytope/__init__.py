"""Exact rational polytopes, linear programming and slice volumes."""

from campana_cli.polytope.assumption import (
    AssumptionVerdict,
    check_assumption_polytopes,
    check_polytope_assumption,
    is_simple,
)
from campana_cli.polytope.rational import RationalPolytope
from campana_cli.polytope.simplex import LPSolution, lp_maximize, lp_minimize
from campana_cli.polytope.toric import (
    DualExponent,
    ExponentReport,
    alpha_L,
    alpha_L_per_cone,
    build_tilde_P,
    build_tilde_P_sigma,
    closed_form_constant,
    dual_exponent_a,
    exponents_a_b,
    local_dual_exponent_a,
)
from campana_cli.polytope.vertices import vertex_enumeration
from campana_cli.polytope.volume import (
    MonteCarloEstimate,
    SliceVolumeSeries,
    monte_carlo_slice_volume,
    polytope_volume,
    slice_volume,
    slice_volume_series,
)

__all__ = [
    # Polytopes and LP
    "RationalPolytope",
    "LPSolution",
    "lp_maximize",
    "lp_minimize",
    "vertex_enumeration",
    # Volumes
    "slice_volume",
    "polytope_volume",
    "slice_volume_series",
    "monte_carlo_slice_volume",
    "SliceVolumeSeries",
    "MonteCarloEstimate",
    # Toric polytopes
    "build_tilde_P",
    "build_tilde_P_sigma",
    "exponents_a_b",
    "dual_exponent_a",
    "local_dual_exponent_a",
    "alpha_L",
    "alpha_L_per_cone",
    "closed_form_constant",
    "ExponentReport",
    "DualExponent",
    # Assumption checker
    "check_assumption_polytopes",
    "check_polytope_assumption",
    "is_simple",
    "AssumptionVerdict",
]
