"""Exception types shared across the package."""


class ConeKitError(Exception):
    """Base class for all conekit errors."""


class DimensionError(ConeKitError):
    """Matrix/vector dimensions do not match the operation."""


class SingularMatrixError(ConeKitError):
    """A nonsingular matrix was required."""


class NotPointedError(ConeKitError):
    """The cone contains a nonzero linear subspace."""


class GradingNotPositiveError(ConeKitError):
    """The grading is not strictly positive on all nonzero generators."""


class DomainError(ConeKitError):
    """An argument lies outside the mathematical domain of the operation."""


class InputParseError(ConeKitError):
    """Problem-file syntax error; carries a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InternalConsistencyError(ConeKitError):
    """An internal invariant failed; indicates a bug, not bad input."""
