class GmoError(Exception):
    """Base class for errors raised by gmocens."""


class DomainError(GmoError, ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class UnsupportedCaseError(GmoError, ValueError):
    """The requested configuration is deliberately not handled."""


class NumericalError(GmoError, ArithmeticError):
    """A numerical routine failed to reach its tolerance.

    Attributes
    ----------
    achieved : float or None
        Error estimate reported by the routine when it gave up.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class DataError(GmoError, ValueError):
    """Input data are malformed or inconsistent."""
