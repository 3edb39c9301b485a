"""Exception types shared across the package."""


class RRGError(Exception):
    """Base class for every error raised by this package."""


class InputError(RRGError, ValueError):
    """Arguments violate an operation's preconditions."""


class SamplingError(RRGError):
    """Rejection sampling ran out of attempts."""

    def __init__(self, message, attempts):
        super().__init__(message)
        self.attempts = attempts


class NumericalError(RRGError):
    """An iterative numerical routine failed to converge."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class ScopeError(RRGError):
    """The requested computation is outside the feasible exact/statistical scope."""


class UndefinedRatioError(RRGError, ZeroDivisionError):
    """A class-size ratio has a zero denominator."""
