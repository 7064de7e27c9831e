"""Exceptions shared across the package."""


class DomainError(ValueError):
    """Raised when inputs leave the supported domain.

    Examples: polynomial values that are not strictly positive on the
    requested range, or an inadmissible polynomial passed to an operation
    that requires admissibility.
    """


class InfeasibleScaleError(ValueError):
    """Raised when a requested scale schedule exceeds the feasibility cap."""
