from __future__ import annotations


class PsrfrError(Exception):
    """Base class for every failure raised by the toolkit."""

    @property
    def code(self) -> str:
        return type(self).__name__


class InsufficientRows(PsrfrError):
    pass


class TooFewRows(PsrfrError):
    pass


class NonFiniteData(PsrfrError):
    pass


class IllConditioned(PsrfrError):
    pass


class NotPositiveDefinite(PsrfrError):
    pass


class NotSymmetric(PsrfrError):
    pass


class RankDeficient(PsrfrError):
    pass


class DegenerateSpectrum(PsrfrError):
    pass


class ShapeMismatch(PsrfrError):
    pass


class LengthMismatch(PsrfrError):
    pass


class DimensionTooSmall(PsrfrError):
    pass


class ConfigInvalid(PsrfrError):
    pass


class IoError(PsrfrError):
    pass


class EmptyDataset(PsrfrError):
    pass


class MissingColumn(PsrfrError):
    pass


class DuplicateColumn(PsrfrError):
    pass


class ParseError(PsrfrError):
    def __init__(self, row: int, column: str, value: str = "") -> None:
        self.row = row
        self.column = column
        self.value = value
        super().__init__(f"cannot parse {value!r} as a number at row {row}, column {column!r}")


class ZeroVariance(PsrfrError):
    def __init__(self, column: str) -> None:
        self.column = column
        super().__init__(f"predictor {column!r} has zero sample variance")
