"""Exception types shared across the package."""


class KirchhoffError(Exception):
    """Base class for all package errors."""


class DomainError(KirchhoffError, ValueError):
    """An argument lies outside the domain of the requested quantity."""


class RegimeError(KirchhoffError, ValueError):
    """The requested quantity is not defined for this exponent regime or parameter set."""


class NumericError(KirchhoffError, ArithmeticError):
    """An iterative procedure failed to converge.

    ``diagnostics`` carries whatever the failing routine knew at the time
    (last iterate, bracket, scan values) for error reporting.
    """

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})
