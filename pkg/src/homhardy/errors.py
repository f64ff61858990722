"""Exception types shared across the package."""


class HardyError(Exception):
    """Base class for all package errors."""


class DomainError(HardyError, ValueError):
    """An argument lies outside the range where an operation is defined."""


class UsageError(HardyError, ValueError):
    """Inconsistent or unknown options (e.g. unknown theorem id)."""


class NotInLpError(DomainError):
    """A weight is not p-integrable on the sphere.

    ``critical`` is the exponent at which integrability breaks down.
    """

    def __init__(self, message, critical=None):
        super().__init__(message)
        self.critical = critical


class SingularPointError(DomainError):
    """Pointwise evaluation requested at a singular point of a weight."""


class EvaluationError(HardyError, ArithmeticError):
    """A quadrature sample was not finite."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DivergenceError(HardyError, ArithmeticError):
    """A radial integral diverges; ``end`` is ``"0"`` or ``"inf"``."""

    def __init__(self, message, end=None):
        super().__init__(message)
        self.end = end


class ConvergenceError(HardyError, RuntimeError):
    """An iterative method failed to reach its tolerance."""

    def __init__(self, message, best=None, grad_norm=None, bracket=None):
        super().__init__(message)
        self.best = best
        self.grad_norm = grad_norm
        self.bracket = bracket
