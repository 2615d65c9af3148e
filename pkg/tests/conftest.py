"""Shared oracles and generators for the test suite.

The eigensolver oracle (numpy.linalg.eigvalsh) is the independent route
against which the package's power-iteration norm is checked; tests never
use the package's own norm as its own reference.
"""

import numpy as np
import pytest

from toepcov import ToeplitzMatrix


def dense_from_row(first_row):
    """Dense symmetric Toeplitz expansion, built independently of the package."""
    first_row = np.asarray(first_row, dtype=float)
    idx = np.abs(np.subtract.outer(np.arange(len(first_row)), np.arange(len(first_row))))
    return first_row[idx]


def oracle_norm(a):
    """Spectral norm via the dense eigensolver."""
    return float(np.max(np.abs(np.linalg.eigvalsh(a))))


def random_psd_toeplitz(rng, p):
    """Random PSD Toeplitz matrix: restriction of a random nonnegative
    circulant spectrum, or a random moving-average autocorrelation."""
    if rng.random() < 0.5:
        lam = rng.uniform(0.0, 2.0, size=p)  # eigenvalues on the circulant grid
        j = np.arange(-(p - 1), p)
        lam_full = lam[np.abs(j)]
        s = np.arange(p)
        angles = 2.0 * np.pi * np.multiply.outer(s, j) / (2 * p - 1)
        row = (np.cos(angles) @ lam_full) / (2 * p - 1)
    else:
        q = int(rng.integers(1, p + 1))
        taps = rng.standard_normal(q)
        row = np.zeros(p)
        for r in range(q):
            row[r] = float(np.dot(taps[: q - r], taps[r:]))
    return ToeplitzMatrix(p, row)


def random_toeplitz(rng, p, scale=1.0):
    return ToeplitzMatrix(p, scale * rng.standard_normal(p))


@pytest.fixture
def rng():
    return np.random.default_rng(20250811)
