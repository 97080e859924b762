"""Exception and warning types shared across the toolkit."""


class AcuityError(Exception):
    """Base class for all domain errors raised by this package."""


class FormatError(AcuityError):
    """An IDX stream violates the container format (magic, length, values)."""


class UnsupportedShape(AcuityError):
    """An IDX image file holds non-square rasters."""


class EmptyDataset(AcuityError):
    """An operation needs at least one example but the split is empty."""


class ResampleError(AcuityError):
    """A resampling target size is outside the allowed range."""


class UnknownTrial(AcuityError):
    """A response referenced a trial id that is not pending (or expired)."""


class DuplicateResponse(AcuityError):
    """A trial that already has a recorded response was answered again."""


class InvalidSelection(AcuityError):
    """A response selection lies outside {-1, 0, ..., 9}."""


class LogParseError(AcuityError):
    """A trial-log line could not be decoded.

    Carries the 1-based line number of the offending line.
    """

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class InsufficientData(AcuityError):
    """A fit was requested on fewer than two usable table rows."""


class DomainError(AcuityError):
    """A numeric argument lies outside the mathematical domain."""


class DegenerateModel(AcuityError):
    """A model with zero slope cannot be inverted."""


class DegenerateDataWarning(UserWarning):
    """All table rows share one error rate; the fit falls back to a flat model."""
