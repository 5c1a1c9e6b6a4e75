"""Exception hierarchy for campana-cli.

Every error carries the process exit code the CLI uses when it surfaces.
Codes are grouped: 2 for configuration, 10-19 for invalid input, 20-29 for
resource caps and 30-39 for unmet mathematical preconditions.
"""

from __future__ import annotations


class CampanaError(Exception):
    """Base class for all campana-cli errors."""

    exit_code = 1


class ConfigError(CampanaError):
    """Invalid run configuration or unreadable configuration file."""

    exit_code = 2


# Input validation


class FanFormatError(CampanaError):
    """Malformed fan file or fan description."""

    exit_code = 10


class NonSmoothConeError(CampanaError):
    """A maximal cone whose generators are not a lattice basis."""

    exit_code = 11

    def __init__(self, cone: tuple[int, ...], det: int) -> None:
        self.cone = cone
        self.det = det
        labels = ", ".join(str(i + 1) for i in cone)
        super().__init__(f"cone {{{labels}}} is not smooth (determinant {det})")


class IncompleteFanError(CampanaError):
    """The maximal cones do not cover the ambient space exactly once."""

    exit_code = 12

    def __init__(self, facet: tuple[int, ...], reason: str) -> None:
        self.facet = facet
        labels = ", ".join(str(i + 1) for i in facet)
        super().__init__(f"fan is not complete at facet {{{labels}}}: {reason}")


class NonPrimitiveRayError(CampanaError):
    """A ray generator whose coordinates share a common factor."""

    exit_code = 13

    def __init__(self, index: int, ray: tuple[int, ...]) -> None:
        self.index = index
        self.ray = ray
        super().__init__(f"ray {index + 1} {ray} is not primitive")


class NonSquarefreeError(CampanaError):
    """A modulus that was required to be squarefree is not."""

    exit_code = 14

    def __init__(self, value: int) -> None:
        self.value = value
        super().__init__(f"{value} is not squarefree")


class ZeroCoordinateError(CampanaError):
    """A torsor point with a vanishing coordinate."""

    exit_code = 15


class InvalidSystemError(CampanaError):
    """A box constraint system outside the admissible range."""

    exit_code = 16


# Resource caps


class BoundTooLargeError(CampanaError):
    """An exact enumeration would exceed the configured work cap."""

    exit_code = 20


class ExplosionGuardError(CampanaError):
    """A lattice-box enumeration would exceed the configured lattice cap."""

    exit_code = 21


# Mathematical preconditions


class NotAmpleError(CampanaError):
    """The divisor L is not ample but the operation requires it."""

    exit_code = 30


class UnboundedPolytopeError(CampanaError):
    """A polytope that must be bounded is not."""

    exit_code = 31


class InfeasibleError(CampanaError):
    """A linear program with an empty feasible region."""

    exit_code = 32


class UnboundedLPError(CampanaError):
    """A linear program whose objective is unbounded above."""

    exit_code = 33


class DegenerateProjectionError(CampanaError):
    """A slice that does not project isomorphically along the chosen axis."""

    exit_code = 34


class AssumptionLError(CampanaError):
    """Some divisor has no maximal cone with a positive L-coefficient."""

    exit_code = 35


class PreconditionError(CampanaError):
    """Any other unmet precondition of a computation."""

    exit_code = 36


class InconsistentResultError(CampanaError):
    """Two independent computations of the same quantity disagree."""

    exit_code = 39
