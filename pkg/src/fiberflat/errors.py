"""Exception hierarchy shared by all modules."""


class FiberflatError(Exception):
    """Base class for library errors."""


class ParseError(FiberflatError, ValueError):
    def __init__(self, message, line=1, column=1, text=None):
        self.message = message
        self.line = line
        self.column = column
        self.text = text
        super().__init__(f"{message} (line {line}, column {column})")


class ResourceBudgetError(FiberflatError):
    """A configured budget (S-pairs, degree, minor size) was exceeded."""

    def __init__(self, message, subcomputation=None):
        self.subcomputation = subcomputation
        super().__init__(message if subcomputation is None else f"{subcomputation}: {message}")


class UnsupportedError(FiberflatError):
    """Input lies outside the supported shapes (ring shape, field tower, ...)."""


class NotWellDefinedError(FiberflatError, ValueError):
    """A ring map or module map failed its construction-time certificate."""


class CriterionInapplicable(FiberflatError):
    """A checker was called on input violating its precondition."""


class ConsistencyViolation(FiberflatError):
    """A theorem-level consistency check failed; carries a reproduction bundle."""

    def __init__(self, message, bundle=None):
        self.bundle = bundle or {}
        super().__init__(message)
