"""Exception types shared across the package."""


class ToepcovError(Exception):
    """Base class for all errors raised by this package."""


class BadBandwidthError(ToepcovError, ValueError):
    """Bandwidth m outside the admissible range 1 <= m <= p/2."""


class BadParamsError(ToepcovError, ValueError):
    """Parameters outside the domain of a generator or evaluator."""


class DimensionMismatchError(ToepcovError, ValueError):
    """Operands have incompatible dimensions."""


class TooFewSamplesError(ToepcovError, ValueError):
    """Not enough observations for the requested operation."""


class NotPSDError(ToepcovError, ValueError):
    """A covariance matrix is not usable as positive semidefinite."""


class NonConvergedError(ToepcovError, RuntimeError):
    """Iterative spectral-norm computation hit its iteration cap."""

    def __init__(self, message, iterations=None, estimate=None):
        super().__init__(message)
        self.iterations = iterations
        self.estimate = estimate


class DegenerateAxisError(ToepcovError, ValueError):
    """Scaling fit requested along an axis without distinct values."""
