"""Exception hierarchy shared by the library and the CLI."""


class RobustCicError(Exception):
    """Base class for every error raised by robust_cic."""


class InvalidInputError(RobustCicError, ValueError):
    """Raised when an argument violates a precondition."""


class DimensionMismatchError(InvalidInputError):
    """Raised when measures, directions or matrices disagree on dimension."""


class ParseError(InvalidInputError):
    """Raised for a malformed row in an input file."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(f"{where}{message}")


class SolverError(RobustCicError):
    """Raised when the exact transport solver does not report an optimal solution."""
