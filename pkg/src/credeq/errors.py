"""Exception types shared across the package.

The CLI maps these onto exit codes: validation problems exit 2,
numerical/calibration failures exit 3.
"""


class CredeqError(Exception):
    """Base class for all package errors."""


class ValidationError(CredeqError):
    """Malformed or inconsistent input data (bad CSV row, violated invariant)."""


class ConfigurationError(CredeqError):
    """Mutually inconsistent options, e.g. a variant given coefficients it ignores."""


class DomainError(CredeqError):
    """Arguments outside the mathematical domain of a formula."""


class NumericalError(CredeqError):
    """A computation degenerated (non-finite value, zero denominator, underflow)."""


class CalibrationError(CredeqError):
    """An optimizer or least-squares fit failed.

    Carries the best iterate seen so far when one exists.
    """

    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual
