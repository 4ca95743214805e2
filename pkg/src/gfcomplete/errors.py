"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """An operation was called with arguments outside its precondition."""


class ResourceLimitError(RuntimeError):
    """An exhaustive procedure would exceed its configured budget."""


class ParseError(ValueError):
    """Malformed input file; carries the 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
