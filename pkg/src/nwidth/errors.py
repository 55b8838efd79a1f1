class NWidthError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(NWidthError, ValueError):
    """Invalid input: bad knot sequence, degenerate interval, out-of-range parameter."""


class NumericalError(NWidthError, RuntimeError):
    """Numerical failure: solver did not converge, mesh under-resolved, precision exhausted."""
