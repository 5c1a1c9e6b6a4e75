"""Core domain models for campana-cli."""

from campana_cli.core.fanfile import FanFile, load_instance, resolve_fan_path
from campana_cli.core.models import ConeData, Fan, FanValidationReport, OrbifoldInstance
from campana_cli.core.rationals import format_fraction, fraction_payload, to_fraction

__all__ = [
    # Models
    "Fan",
    "OrbifoldInstance",
    "ConeData",
    "FanValidationReport",
    # Fan files
    "FanFile",
    "load_instance",
    "resolve_fan_path",
    # Rationals
    "to_fraction",
    "format_fraction",
    "fraction_payload",
]
