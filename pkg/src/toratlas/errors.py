"""Exception types shared across the package."""


class ToratlasError(Exception):
    """Base class for all package errors."""


class DomainError(ToratlasError, ValueError):
    """An argument violates an operation's precondition."""


class CatalogError(ToratlasError, KeyError):
    """Unknown catalog graph name."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown catalog entry"


class BudgetExceeded(ToratlasError):
    """An exhaustive search would exceed the configured budget."""


class UnsupportedInput(ToratlasError, ValueError):
    """The input is outside the class of graphs an operation handles."""


class NoCycleError(DomainError):
    """The graph is a forest."""


class ParseError(ToratlasError, ValueError):
    """Malformed graph or map input. Carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
