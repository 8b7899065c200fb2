"""Exception types raised across the package."""


class RulerankError(Exception):
    """Base class for all package errors."""


class DataError(RulerankError):
    """Problem with an input dataset."""


class MissingTarget(DataError):
    pass


class NonNumericTarget(DataError):
    pass


class RaggedRow(DataError):
    pass


class EmptyDataset(DataError):
    pass


class EmptyColumn(DataError):
    pass


class NotEnoughItems(RulerankError):
    pass


class AllTied(RulerankError):
    """Every pair of items has equal target score; no preference signal."""


class SchemaMismatch(RulerankError):
    pass


class ExceptionDepthExceeded(RulerankError):
    """Exception nesting during rule learning went past the configured cap."""


class EmptyInput(RulerankError):
    pass


class ProgramSyntaxError(RulerankError):
    """Malformed logic-program text, with 1-based position information."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
