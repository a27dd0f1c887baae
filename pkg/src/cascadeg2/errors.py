"""Exception types shared across the package."""


class NumericError(RuntimeError):
    """Raised when an integration or propagation produces non-finite values."""


class DivergentAverageError(ValueError):
    """Raised when a time-averaged correlation integral does not converge."""
