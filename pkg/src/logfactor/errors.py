"""Exception hierarchy shared by all modules.

The CLI maps every subclass of :class:`LogFactorError` to exit code 1 and
prints the category name, so new errors should subclass one of these.
"""


class LogFactorError(Exception):
    category = "error"


class DomainError(LogFactorError, ValueError):
    """A numeric argument lies outside the operation's domain."""

    category = "domain"


class PrimeTableError(LogFactorError, IndexError):
    """Requested prime index lies beyond the generated table; extend it and retry."""

    category = "extend-table"

    def __init__(self, index: int, size: int):
        super().__init__(f"prime index {index} beyond table of size {size}; extend the table")
        self.index = index
        self.size = size


class LevelOutOfRangeError(LogFactorError, IndexError):
    category = "level-range"


class GridTooSmallError(LogFactorError):
    category = "grid"

    def __init__(self, message: str, suggested_extent: float):
        super().__init__(f"{message}; try xi_max >= {suggested_extent:g}")
        self.suggested_extent = suggested_extent


class ConvergenceError(LogFactorError):
    category = "convergence"

    def __init__(self, message: str, history=()):
        super().__init__(message)
        self.history = list(history)


class IntegrationError(LogFactorError):
    category = "integration"
