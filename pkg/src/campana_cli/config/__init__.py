"""Run configuration and report export."""

from campana_cli.config.exporter import (
    ReportEnvelope,
    dumps_envelope,
    emit_plot_data,
    export_config,
    write_envelope,
)
from campana_cli.config.settings import COMMANDS, RunConfig, load_config, read_config_file

__all__ = [
    # Settings
    "RunConfig",
    "COMMANDS",
    "load_config",
    "read_config_file",
    # Export
    "ReportEnvelope",
    "dumps_envelope",
    "write_envelope",
    "emit_plot_data",
    "export_config",
]
