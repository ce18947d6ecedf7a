"""Exception and warning types shared across the toolkit."""


class GelflowError(Exception):
    """Base class for all toolkit errors."""


class InvalidInputError(GelflowError, ValueError):
    """An argument violates a documented precondition."""


class ParseError(InvalidInputError):
    """A dataset file does not match the expected schema.

    Carries the offending row (1-based, excluding the header) and column
    name so bad files can be fixed at the bench.
    """

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        self.row = row
        self.column = column
        loc = []
        if row is not None:
            loc.append(f"row {row}")
        if column is not None:
            loc.append(f"column {column!r}")
        super().__init__(f"{message} ({', '.join(loc)})" if loc else message)


class InsufficientDataError(GelflowError):
    """Not enough trainable measurements for the requested operation."""


class ExcludedDataError(GelflowError):
    """An excluded measurement was used where a valid one is required."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"measurement excluded: {reason}")


class NumericalFailureError(GelflowError):
    """A linear-algebra step failed beyond recovery; carries diagnostics."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class ConflictError(GelflowError):
    """A campaign mutation collides with the recorded history."""


class CampaignCompleteError(GelflowError):
    """The campaign reached its configured iteration budget."""


class ObjectiveEvaluationError(GelflowError):
    """An objective function failed; carries the offending decision vector."""

    def __init__(self, message: str, x=None):
        self.x = x
        super().__init__(message)


class DataWarning(UserWarning):
    """Non-fatal data issue (clamped conversion, missing instrument errors)."""


class ExtrapolationWarning(UserWarning):
    """A surrogate was evaluated outside its training bounds."""
