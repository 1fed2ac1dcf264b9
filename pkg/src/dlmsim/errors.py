"""Exception hierarchy shared across the package."""

from __future__ import annotations


class DlmSimError(Exception):
    """Base class for every error raised by dlmsim."""


class InvalidParameter(DlmSimError, ValueError):
    pass


class InvalidInput(DlmSimError, ValueError):
    pass


class SimultaneousInput(DlmSimError):
    """More than one message offered to a beamsplitter at the same tick."""


class EmptySchedule(DlmSimError, ValueError):
    pass


class MismatchedTotals(DlmSimError, ValueError):
    pass


class EmptyStream(DlmSimError, ValueError):
    pass


class WindowTooLarge(DlmSimError, ValueError):
    pass


class ZeroTotal(DlmSimError, ValueError):
    pass


class ScheduleSyntaxError(DlmSimError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class ScheduleSemanticError(DlmSimError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)
        self.message = message
        self.line = line
        self.column = column
