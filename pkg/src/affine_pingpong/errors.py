"""Exception hierarchy shared by the library and the command line front end.

Each class carries the process exit status the CLI reports for it.
"""

from __future__ import annotations


class PingPongError(Exception):
    exit_code = 1


class ParseError(PingPongError, ValueError):
    exit_code = 2

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class HypothesisError(PingPongError):
    """The generating set violates a standing hypothesis of the construction."""

    exit_code = 3


class GlobalFixedPointError(HypothesisError):
    def __init__(self, point):
        self.point = point
        super().__init__(f"global fixed point {point}: every generator fixes it")


class VirtuallySolvableSignature(HypothesisError):
    def __init__(self, explored: int):
        self.explored = explored
        super().__init__(
            f"no hyperbolic element in S^k for k <= {explored}: "
            "every explored element has |trace| <= 2 (virtually solvable signature)"
        )


class BudgetExceeded(PingPongError):
    exit_code = 4

    def __init__(self, message: str, explored: int | None = None):
        self.explored = explored
        super().__init__(message)


class IndeterminateError(PingPongError):
    """Interval comparison did not separate within the refinement budget."""

    exit_code = 5


class ValidationError(PingPongError):
    exit_code = 6

    def __init__(self, message: str, failures: list[str] | None = None):
        self.failures = list(failures or [])
        super().__init__(message)


class IncompatibleFieldError(ValueError):
    pass
