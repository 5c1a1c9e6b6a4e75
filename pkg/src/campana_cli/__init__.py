"""campana-cli - Count Campana points on split toric varieties."""

__version__ = "0.1.0"
