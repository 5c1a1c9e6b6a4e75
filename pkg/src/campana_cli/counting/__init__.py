"""Heights, coprimality, exact point counts and the leading constant."""

from campana_cli.counting.constant import (
    LeadingConstant,
    TamagawaCheck,
    cone_sum,
    leading_constant,
    leading_constant_dsum,
    tamagawa_factor,
)
from campana_cli.counting.height import HeightEvaluator, height
from campana_cli.counting.moebius import (
    MoebiusLocal,
    coprime_indicator,
    iter_mu_support,
    local_euler_factor,
    moebius_local,
)
from campana_cli.counting.points import InversionCheck, count_A, count_N, moebius_inversion_check
from campana_cli.counting.report import COLUMNS, AsymptoticReport, asymptotic_report, prediction

__all__ = [
    # Heights
    "HeightEvaluator",
    "height",
    # Coprimality
    "MoebiusLocal",
    "coprime_indicator",
    "moebius_local",
    "local_euler_factor",
    "iter_mu_support",
    # Counts
    "count_N",
    "count_A",
    "moebius_inversion_check",
    "InversionCheck",
    # Constant
    "LeadingConstant",
    "TamagawaCheck",
    "cone_sum",
    "leading_constant",
    "leading_constant_dsum",
    "tamagawa_factor",
    # Report
    "AsymptoticReport",
    "asymptotic_report",
    "prediction",
    "COLUMNS",
]
