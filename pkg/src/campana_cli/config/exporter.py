"""Report and configuration export.

Reports are wrapped in a :class:`ReportEnvelope` and written as sorted-key
JSON. Tabular series go to CSV through pandas.
"""

from __future__ import annotations

import json
import sys
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

import pandas as pd
import yaml

from campana_cli import __version__
from campana_cli.config.settings import RunConfig

TOOL_NAME = "campana-cli"


@dataclass
class ReportEnvelope:
    """Command output with provenance."""

    command: str
    input_hash: str
    seed: int
    payload: dict[str, Any]
    warnings: list[str] = field(default_factory=list)
    timings: Optional[dict[str, float]] = None
    tool: str = TOOL_NAME
    version: str = __version__

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        if self.timings is None:
            data.pop("timings")
        return data


def dumps_envelope(envelope: ReportEnvelope) -> str:
    return json.dumps(envelope.to_dict(), sort_keys=True, indent=2, default=str) + "\n"


def write_envelope(envelope: ReportEnvelope, path: Optional[Path] = None) -> None:
    """Write the envelope as JSON to ``path``, or to stdout when ``path`` is None."""
    text = dumps_envelope(envelope)
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def emit_plot_data(rows: Sequence[dict[str, Any]], columns: Sequence[str], path: Path) -> None:
    """
    Write ``rows`` as CSV with a header row.

    Parameters
    ----------
    rows : sequence of dict
        One mapping per row; keys outside ``columns`` are ignored.
    columns : sequence of str
        Column order. An empty ``rows`` gives a header-only file.
    path : Path
        Output file, UTF-8 with LF line endings.
    """
    frame = pd.DataFrame(list(rows), columns=list(columns))
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")


_TEMPLATE_HEADER = """\
# campana-cli run configuration
#
# command: one of validate, lp, alpha, assumption, slice, mfull.count,
#   mfull.constants, mfull.verify, hyperbola.demo, hyperbola.estimate,
#   count, constant, asymptotic
# fan: path to a fan JSON file or the name of a bundled fan (p1, p2, ...)
# work_cap can also be set with the CAMPANA_WORK_CAP environment variable.
"""


def export_config(config: RunConfig, output_path: Path) -> None:
    """
    Write ``config`` as a commented YAML template.

    Parameters
    ----------
    config : RunConfig
        Configuration to serialise.
    output_path : Path
        Path to write the template to.
    """
    data = config.model_dump(mode="json")
    with open(output_path, "w") as f:
        f.write(_TEMPLATE_HEADER)
        yaml.dump(data, f, default_flow_style=False, sort_keys=False)
