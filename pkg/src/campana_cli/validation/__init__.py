"""Fan validation."""

from campana_cli.validation.validator import print_validation_result, validate_fan

__all__ = ["validate_fan", "print_validation_result"]
