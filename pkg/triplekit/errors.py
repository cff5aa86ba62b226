"""Exception types raised by triplekit operations.

Checkers report mathematical failures as data; these exceptions are for
violated preconditions and bad input.
"""

from __future__ import annotations

from typing import Optional


class TriplekitError(ValueError):
    """Base class for every error raised by the package."""


class NotContained(TriplekitError):
    pass


class AmbientMismatch(TriplekitError):
    pass


class DimensionMismatch(TriplekitError):
    pass


class NotALieAlgebra(TriplekitError):
    pass


class NotAnLts(TriplekitError):
    pass


class InvalidRepresentation(TriplekitError):
    pass


class NotNijenhuis(TriplekitError):
    pass


class NotAnOOperator(TriplekitError):
    pass


class NotAPreLts(TriplekitError):
    pass


class EvenDegree(TriplekitError):
    pass


class PsiNotInvertible(TriplekitError):
    pass


class NotAMorphism(TriplekitError):
    pass


class BaseMismatch(TriplekitError):
    pass


class NotInvertibleSeries(TriplekitError):
    pass


class NotACocycle(TriplekitError):
    pass


class NotALieOOperator(TriplekitError):
    pass


class InvalidScalar(TriplekitError):
    """Text or number that is not an exact rational."""


class CoboundaryError(TriplekitError):
    """A coboundary image left its cochain space."""


class DocumentError(TriplekitError):
    """Malformed or unresolvable input document."""

    def __init__(self, message: str, location: Optional[str] = None) -> None:
        self.location = location
        if location:
            message = f"{message} (at {location})"
        super().__init__(message)


# Failures that mean "the mathematics said no" rather than "the input is bad".
VERDICT_ERRORS = (
    NotAnLts,
    NotALieAlgebra,
    InvalidRepresentation,
    NotNijenhuis,
    NotAnOOperator,
    NotAPreLts,
    NotAMorphism,
    NotACocycle,
    NotALieOOperator,
    NotContained,
)
