"""Exception types shared across the package."""


class FringeError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(FringeError, ValueError):
    """A matrix dimension is invalid or inconsistent with its partners."""


class TruncationError(FringeError, RuntimeError):
    """A truncated-space computation exceeded its dimension budget."""


class ConvergenceError(TruncationError):
    """Dimension doubling failed to converge below the policy maximum."""


class StateValidationError(FringeError, ValueError):
    """A density matrix failed Hermiticity, trace, or positivity validation."""


class StateFormatError(StateValidationError):
    """A state file could not be parsed into a valid two-mode density matrix."""


class ConsistencyError(FringeError, ArithmeticError):
    """An internal cross-check failed, e.g. a trace with a large imaginary part."""


class DegenerateScreenError(FringeError, ArithmeticError):
    """A fringe-intensity denominator is too close to zero to divide by."""


class CalibrationError(FringeError, ValueError):
    """No coupling value in the search range attains the requested target."""
