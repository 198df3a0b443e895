"""Exception hierarchy shared by every limkit module."""

from __future__ import annotations


class LimkitError(Exception):
    """Base class for domain errors raised by limkit."""


class DimensionMismatch(LimkitError):
    """Matrix or vector shapes do not fit together."""


class CompositionNotZero(LimkitError):
    """Two consecutive differentials do not compose to zero."""


class UnknownObject(LimkitError):
    """An object name is not part of the poset."""


class NotMonic(LimkitError):
    """A natural transformation required to be a monomorphism is not."""


class UnboundedFiltration(LimkitError):
    """A filtration has no finite bound, so pages cannot be computed."""


class NotSimplexLike(LimkitError):
    """A poset expected to be simplex-like fails the slice test."""


class TrivialSylow(LimkitError):
    """The Sylow subgroup for the requested prime is trivial."""


class ConeNotMonic(LimkitError):
    """Some cone map of a group diagram is not injective."""


class NotContractibleEvidence(LimkitError):
    """A base poset assumed contractible has nonzero reduced homology."""


class InvalidInput(LimkitError):
    """A structure fails validation (poset, diagram or covering family)."""

    def __init__(self, message: str, violations: list[str] | None = None) -> None:
        super().__init__(message)
        self.violations = list(violations or [])


class ParseError(LimkitError):
    """Malformed input text; carries the 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnknownReference(ParseError):
    """Input text refers to an object or group that was never declared."""


class InputSyntaxError(ParseError):
    """A line of input text does not match the grammar."""


class InputDimensionMismatch(ParseError, DimensionMismatch):
    """A matrix in input text does not fit the declared generator counts."""
