"""Exception hierarchy shared across the package.

The CLI maps ValidationError (and its parse-level siblings) to exit code 1
and ConfigError to exit code 2; everything else is a bug.
"""


class ContourError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(ContourError):
    """A document violates a data-model invariant.

    ``line`` is attached by the file loader when the offending document
    came from a contour file; ``kind`` is the concrete class name.
    """

    line: int | None = None

    @property
    def kind(self) -> str:
        return type(self).__name__


class EmptyDocument(ValidationError):
    pass


class NonConsecutiveTokenIndices(ValidationError):
    pass


class NegativeSurprisal(ValidationError):
    pass


class NegativeCharCount(ValidationError):
    pass


class NonContiguousUnitIds(ValidationError):
    pass


class NestingViolation(ValidationError):
    pass


class IndexOutOfRange(ContourError):
    pass


class ParseError(ContourError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class EmptyInput(ContourError):
    pass


class EmptyTrainingSet(ContourError):
    pass


class MissingOrder(ContourError):
    pass


class EmptyMatrix(ContourError):
    pass


class ColumnMismatch(ContourError):
    pass


class NonNested(ContourError):
    pass


class DegenerateDf(ContourError):
    pass


class TooFewDocuments(ContourError):
    pass


class OutOfRangeP(ContourError):
    pass


class InvalidSpec(ContourError):
    pass


class ConfigError(ContourError):
    pass
