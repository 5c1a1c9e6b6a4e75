"""Bundled fan files for campana-cli."""

from pathlib import Path

DATA_DIR = Path(__file__).parent


def get_data_path(name: str) -> Path:
    """Get path to a data file."""
    return DATA_DIR / name


def list_bundled_fans() -> list[str]:
    """Names of the bundled fan files."""
    return sorted(p.stem for p in DATA_DIR.glob("*.json"))
