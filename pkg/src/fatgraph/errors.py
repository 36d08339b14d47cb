"""Exception types shared across the package."""


class FatgraphError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(FatgraphError, ValueError):
    """Malformed text input.

    ``line`` and ``column`` are 1-based; either may be ``None`` when the
    problem is not tied to one position (e.g. a half edge that never appears).
    """

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class BudgetExceeded(FatgraphError):
    """An exhaustive enumeration would exceed its configured budget."""


class DisconnectedError(FatgraphError, ValueError):
    """A genus-type query was made on a disconnected object."""


class InvariantError(FatgraphError):
    """An internal consistency check failed (corrupt input or a bug)."""
