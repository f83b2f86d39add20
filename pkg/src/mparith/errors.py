"""Exception hierarchy shared by every module of the package."""


class MPError(Exception):
    """Base class for all library errors."""


class RangeError(MPError, OverflowError):
    """Binary exponent left the supported signed 32-bit window."""


class DivisionByZero(MPError, ZeroDivisionError):
    pass


class DomainError(MPError, ValueError):
    """Argument outside the domain of the operation."""


class ParseError(MPError, ValueError):
    pass


class ConvergenceError(MPError, ArithmeticError):
    pass


class DerivativeError(ConvergenceError):
    """Finite-difference slope vanished below the evaluation noise."""


class DegeneracyError(ConvergenceError):
    """Interpolation nodes collided at working precision."""


class ConfigurationError(MPError, ValueError):
    pass


class CrossCheckError(MPError, AssertionError):
    """Two independent evaluation routes disagreed."""
