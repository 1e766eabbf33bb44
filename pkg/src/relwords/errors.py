"""Exception types raised by the relwords library."""

from __future__ import annotations


class RelwordsError(Exception):
    """Base class for every error this library raises deliberately."""


class ValidationError(RelwordsError):
    """A matrix fails one of the relational-word well-formedness rules."""

    def __init__(self, message: str, cell: tuple[int, int] | None = None):
        if cell is not None:
            message = f"{message} at {cell}"
        super().__init__(message)
        self.cell = cell


class NonSquare(ValidationError):
    pass


class BadDigit(ValidationError):
    pass


class DiagonalNotEq(ValidationError):
    pass


class Asymmetric(ValidationError):
    pass


class NotTransitive(ValidationError):
    pass


class CongruenceViolation(ValidationError):
    pass


class LengthMismatch(RelwordsError):
    pass


class BadEmbedding(RelwordsError):
    pass


class OutOfRange(RelwordsError):
    pass


class EmptyAlphabet(RelwordsError):
    pass


class CapExceeded(RelwordsError):
    pass


class SiteOutOfRange(RelwordsError):
    pass


class SiteNotApplicable(RelwordsError):
    """The deletion window contradicts the rule, directly or after closure."""


class UnknownRule(RelwordsError):
    pass


class StepNotApplicable(RelwordsError):
    """A script step could not be replayed; carries the 0-based step index."""

    def __init__(self, index: int, message: str):
        super().__init__(f"step {index}: {message}")
        self.index = index


class NotFullyDefined(RelwordsError):
    pass


class KTooSmall(RelwordsError):
    pass


class UnknownCase(RelwordsError):
    pass


class Mismatch(RelwordsError):
    pass


class BoundViolated(RelwordsError):
    pass
