"""Toeplitz masks (banding, tapering, sparse support) and their weighted norms.

A mask is a symmetric Toeplitz weight pattern M[s, t] = w[|s - t|] with
nonnegative first-row weights. The weighted l1/l2 norms divide each weight
by the length p - l of its diagonal; they are the mask functionals entering
the estimation-error bounds, and for 0/1 masks they reduce to the weighted
support cardinality nu(S) = sum_{l in S} p / (p - l).
"""

from dataclasses import dataclass

import numpy as np

from .core import ToeplitzMatrix, _as_readonly, _require_finite
from .errors import BadBandwidthError, DimensionMismatchError


@dataclass(frozen=True)
class ToeplitzMask:
    """Nonnegative Toeplitz weight pattern of size p."""

    p: int
    weights: np.ndarray

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be >= 1")
        w = _as_readonly(self.weights)
        if w.shape != (self.p,):
            raise DimensionMismatchError(
                f"weights have length {w.shape}, expected ({self.p},)")
        _require_finite(w, "weights")
        if np.any(w < 0):
            raise ValueError("mask weights must be nonnegative")
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class SupportSet:
    """Strictly increasing subset of offsets {0, ..., p-1}."""

    p: int
    indices: tuple

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be >= 1")
        idx = tuple(int(i) for i in self.indices)
        if any(i < 0 or i >= self.p for i in idx):
            raise ValueError("support indices must lie in [0, p)")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("support indices must be strictly increasing")
        object.__setattr__(self, "indices", idx)


def _check_bandwidth(p, m):
    # real comparison m <= p/2, i.e. 2m <= p
    if m < 1 or 2 * m > p:
        raise BadBandwidthError(f"bandwidth m={m} outside [1, p/2] for p={p}")


def banding_mask(p, m):
    """0/1 mask keeping offsets r <= m; requires 1 <= m <= p/2."""
    _check_bandwidth(p, m)
    w = np.zeros(p)
    w[: m + 1] = 1.0
    return ToeplitzMask(p, w)


def tapering_mask(p, m):
    """Flat-then-linear-ramp mask: 1 for r <= m/2, then 2 - 2r/m down to 0
    at r = m, zero beyond; requires 1 <= m <= p/2.

    Branch boundaries compare exact rationals (2r vs m), so odd m puts
    r = m/2 rounded down in the flat region.
    """
    _check_bandwidth(p, m)
    w = np.zeros(p)
    r = np.arange(m + 1)
    w[: m + 1] = np.where(2 * r <= m, 1.0, 2.0 - 2.0 * r / m)
    return ToeplitzMask(p, w)


def support_mask(S):
    """Indicator mask of a support set."""
    w = np.zeros(S.p)
    w[list(S.indices)] = 1.0
    return ToeplitzMask(S.p, w)


def ones_mask(p):
    """All-ones mask (no masking)."""
    return ToeplitzMask(p, np.ones(p))


def weighted_l1(M):
    """Weighted l1 norm: sum_l w[l] / (p - l)."""
    denom = M.p - np.arange(M.p)
    return float(np.sum(M.weights / denom))


def weighted_l2(M):
    """Weighted l2 norm: sqrt(sum_l w[l]^2 / (p - l))."""
    denom = M.p - np.arange(M.p)
    return float(np.sqrt(np.sum(M.weights**2 / denom)))


def weighted_cardinality(S):
    """Weighted support cardinality nu(S) = sum_{l in S} p / (p - l).

    Computed as p * weighted_l1(indicator mask) so the identity
    nu(S) = p ||w||_{1,*} holds exactly in floating point.
    """
    return S.p * weighted_l1(support_mask(S))


def apply_mask(M, T):
    """Entrywise product of a mask and a Toeplitz matrix (both Toeplitz)."""
    if M.p != T.p:
        raise DimensionMismatchError(f"p mismatch: mask {M.p} vs matrix {T.p}")
    return ToeplitzMatrix(T.p, M.weights * T.first_row)
