"""Sample covariance, diagonal averaging, masked estimation, error metric.

The pipeline: raw sample covariance (1/n) sum_i X_i X_i^T, averaged along
each diagonal into a Toeplitz estimate, then multiplied entrywise by a
Toeplitz mask. Errors between Toeplitz matrices are measured in the exact
spectral norm of the dense difference, the quantity the error bounds
control.
"""

from dataclasses import dataclass

import numpy as np

from . import _backend
from .core import DenseSymmetric, ToeplitzMatrix, _require_finite, toeplitz_diff_norm
from .errors import DimensionMismatchError, TooFewSamplesError


@dataclass(frozen=True)
class SampleMatrix:
    """n observations of a p-variate vector, one observation per row."""

    n: int
    p: int
    rows: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise TooFewSamplesError("need at least one observation")
        a = np.array(self.rows, dtype=np.float64)
        if a.shape != (self.n, self.p):
            raise DimensionMismatchError(
                f"rows have shape {a.shape}, expected ({self.n}, {self.p})")
        _require_finite(a, "observations")
        a.setflags(write=False)
        object.__setattr__(self, "rows", a)

    @classmethod
    def from_rows(cls, rows):
        a = np.atleast_2d(np.asarray(rows, dtype=np.float64))
        return cls(a.shape[0], a.shape[1], a)


def sample_covariance(X, center=False):
    """Sample covariance (1/n) sum_i X_i X_i^T.

    With ``center`` set, the sample mean is subtracted from every row first;
    the normalization stays 1/n (the mean-zero model is the default, and
    centering is a deviation knob requiring n >= 2).
    """
    rows = X.rows
    if center:
        if X.n < 2:
            raise TooFewSamplesError("centering requires n >= 2")
        rows = rows - rows.mean(axis=0)
    return DenseSymmetric(X.p, rows.T @ rows / X.n)


def diagonal_average(A):
    """Average the entries of a symmetric matrix over its diagonals.

    Returns the ToeplitzMatrix with first_row[r] equal to the mean of the
    entries with |s - t| = r (one of the two mirrored diagonals; they agree
    by symmetry).
    """
    a = np.ascontiguousarray(A.entries)
    sums = _backend.diag_sums(a)
    counts = A.p - np.arange(A.p)
    return ToeplitzMatrix(A.p, sums / counts)


def masked_toeplitz_estimate(X, M, center=False):
    """Masked diagonal-averaged estimator: first_row[r] = w[r] * avg_r."""
    if M.p != X.p:
        raise DimensionMismatchError(f"p mismatch: mask {M.p} vs samples {X.p}")
    avg = diagonal_average(sample_covariance(X, center=center))
    return ToeplitzMatrix(X.p, M.weights * avg.first_row)


def estimation_error(A, B):
    """Spectral norm of the dense expansion of A - B (both Toeplitz)."""
    return toeplitz_diff_norm(A, B)
