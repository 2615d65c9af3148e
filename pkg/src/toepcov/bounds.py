"""Closed-form error-bound evaluators and smoothness-driven bandwidth choice.

All evaluators use the natural logarithm and set every unspecified absolute
constant to 1, so the returned numbers are bound *shapes*: meaningful for
scaling and monotonicity comparisons, not as certified absolute levels.

The variance bracket is K^2 (||w||_{2,*} sqrt(t/n) + ||w||_{1,*} t/n) with
t = log(p) for the in-expectation form; the banding/tapering form
substitutes the norm estimates driven by the bandwidth m, and the sparse
form the weighted cardinality nu(S). Bandwidths for the smoothness
class F_beta balance this variance shape against the bias bounds
12 L m^{-beta} (tapering) and 12 L log(m) m^{-beta} (banding).
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import GridKind, ToeplitzMatrix, density_grid, four_p_grid_points, spectral_density
from .errors import BadParamsError
from .masks import (ToeplitzMask, _check_bandwidth, support_mask,
                    weighted_cardinality, weighted_l1, weighted_l2)


@dataclass(frozen=True)
class SmoothnessParams:
    """Spectral-density smoothness class parameters (order beta, levels L0, L)."""

    beta: float
    L0: float
    L: float

    def __post_init__(self):
        for name in ("beta", "L0", "L"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise BadParamsError(f"{name} must be finite and positive")


@dataclass(frozen=True)
class BoundValue:
    """A bound evaluation together with the inputs that produced it."""

    mean_term: float
    prob_term: float = None
    inputs: dict = None


class BandwidthChoice(NamedTuple):
    m: int
    clamped: bool


def _bracket(l1, l2, n, t, K2):
    return K2 * (l2 * math.sqrt(t / n) + l1 * t / n)


def variance_bound_prob(M, n, t, K2):
    """Deviation-level variance bound K2 (||w||_2* sqrt(t/n) + ||w||_1* t/n)."""
    if t <= 0:
        raise BadParamsError("t must be positive")
    if n < 1:
        raise BadParamsError("n must be >= 1")
    if K2 <= 0:
        raise BadParamsError("K2 must be positive")
    return _bracket(weighted_l1(M), weighted_l2(M), n, t, K2)


def variance_bound_mean(M, n, K2):
    """Expected-error variance bound: the deviation form at t = log(p)."""
    if n < 1:
        raise BadParamsError("n must be >= 1")
    if K2 <= 0:
        raise BadParamsError("K2 must be positive")
    return _bracket(weighted_l1(M), weighted_l2(M), n, math.log(M.p), K2)


def corollary_bound(m, p, n, K2):
    """Banding/tapering bound shape K2 (sqrt(m log p/(p n)) + m log p/(p n))."""
    _check_bandwidth(p, m)
    x = m * math.log(p) / (p * n)
    return K2 * (math.sqrt(x) + x)


def corollary_norm_bounds(m, p):
    """Closed-form estimates dominating the weighted norms of bandwidth-m
    banding/tapering masks: ||w||_1* <= 4(m+1)/p, ||w||_2* <= sqrt of that."""
    _check_bandwidth(p, m)
    l1 = 4.0 * (m + 1) / p
    return l1, math.sqrt(l1)


def sparse_bound(S, n, t, K2):
    """Sparse-support bound shape K2 (sqrt(nu t/(p n)) + nu t/(p n))."""
    if t <= 0:
        raise BadParamsError("t must be positive")
    nu = weighted_cardinality(S)
    x = nu * t / (S.p * n)
    return K2 * (math.sqrt(x) + x)


def _bandwidth_raw(sp, n, p):
    if p < 2:
        raise BadParamsError("bandwidth selection needs p >= 2 (log p > 0)")
    if n < 1:
        raise BadParamsError("n must be >= 1")
    return (sp.L / sp.L0 ** (2 * sp.beta + 2) * n * p / math.log(p)) \
        ** (1.0 / (2 * sp.beta + 1))


def _clamp(raw, p):
    m = math.floor(raw)
    lo, hi = 1, p // 2
    clamped = m < lo or m > hi
    return BandwidthChoice(min(max(m, lo), hi), clamped)


def tapering_bandwidth(sp, n, p):
    """Bias/variance-balancing bandwidth for the tapering mask,
    floor((L / L0^(2b+2) * n p / log p)^(1/(2b+1))), clamped to [1, p/2]."""
    return _clamp(_bandwidth_raw(sp, n, p), p)


def banding_bandwidth(sp, n, p):
    """Banding analogue: the tapering choice times log(p)^(1/beta)."""
    return _clamp(_bandwidth_raw(sp, n, p) * math.log(p) ** (1.0 / sp.beta), p)


def bias_bound_tapering(sp, m):
    """Sup-norm bias bound 12 L m^(-beta) of the tapering mask on F_beta."""
    if m < 1:
        raise BadParamsError("m must be >= 1")
    return 12.0 * sp.L * m ** (-sp.beta)


def bias_bound_banding(sp, m):
    """Banding bias bound 12 L log(m) m^(-beta); zero at m = 1."""
    if m < 1:
        raise BadParamsError("m must be >= 1")
    return 12.0 * sp.L * math.log(m) * m ** (-sp.beta)


def _unit_profile(p, sp, model, rho):
    r = np.arange(p, dtype=np.float64)
    if model == "geometric":
        if rho is None or not 0.0 <= rho < 1.0:
            raise BadParamsError("geometric model needs rho in [0, 1)")
        return rho ** r
    if model == "polynomial":
        return (r + 1.0) ** (-(sp.beta + 1.0))
    raise BadParamsError(f"unknown decay model: {model!r}")


def smooth_class_cov(p, sp, model, rho=None):
    """Toeplitz covariance with polynomially or geometrically decaying
    coefficients, scaled so the density sup-norm stays within L0.

    sigma_r is A (r+1)^(-(beta+1)) (polynomial) or A rho^r (geometric). The
    profile's circulant-grid density must already be nonnegative (scaling
    cannot fix a sign); A is then set to L0 over the rigorous sup-norm
    bound 2 max_k |f(x_k)| of the unit profile, which guarantees
    ||f||_inf <= L0. Membership in the smoothness class is approximate:
    only grid-level nonnegativity and the sup-norm cap are enforced.
    """
    if p < 1:
        raise BadParamsError("p must be >= 1")
    unit = ToeplitzMatrix(p, _unit_profile(p, sp, model, rho))
    if float(np.min(density_grid(unit, GridKind.CIRCULANT).values)) < 0.0:
        raise BadParamsError(
            "no positive scale makes the circulant-grid density nonnegative "
            f"for {model} decay at p={p}")
    sup_bound = 2.0 * float(np.max(np.abs(spectral_density(unit, four_p_grid_points(p)))))
    return ToeplitzMatrix(p, (sp.L0 / sup_bound) * unit.first_row)


def _require_grid_nonneg(T, what):
    if float(np.min(density_grid(T, GridKind.CIRCULANT).values)) < 0.0:
        raise BadParamsError(
            f"{what} has a negative circulant-grid density; not usable as a covariance")
    return T


def geometric_cov(p, rho, scale=1.0):
    """Toeplitz covariance sigma_r = scale * rho^r (grid-checked PSD proxy)."""
    if not 0.0 <= rho < 1.0:
        raise BadParamsError("rho must lie in [0, 1)")
    if scale <= 0:
        raise BadParamsError("scale must be positive")
    row = scale * rho ** np.arange(p, dtype=np.float64)
    return _require_grid_nonneg(ToeplitzMatrix(p, row), "geometric profile")


def polynomial_cov(p, beta, scale=1.0):
    """Toeplitz covariance sigma_r = scale * (r+1)^-(beta+1)."""
    if beta <= 0:
        raise BadParamsError("beta must be positive")
    if scale <= 0:
        raise BadParamsError("scale must be positive")
    row = scale * (np.arange(p, dtype=np.float64) + 1.0) ** (-(beta + 1.0))
    return _require_grid_nonneg(ToeplitzMatrix(p, row), "polynomial profile")


def ma_cov(p, taps):
    """Sparse/banded Toeplitz covariance as a moving-average autocorrelation.

    sigma_r = sum_j h_j h_{j+r} for filter taps h, zero beyond the tap
    range, so the support is the difference set of the taps' support and
    the matrix is PSD for every p >= len(taps) (its density is |H|^2 >= 0).
    """
    h = np.asarray(taps, dtype=np.float64)
    if h.ndim != 1 or h.size < 1:
        raise BadParamsError("taps must be a nonempty 1-d sequence")
    if h.size > p:
        raise BadParamsError(f"need p >= number of taps ({h.size})")
    if not np.any(h != 0.0):
        raise BadParamsError("taps must not be all zero")
    row = np.zeros(p)
    for r in range(h.size):
        row[r] = float(np.dot(h[: h.size - r], h[r:]))
    return ToeplitzMatrix(p, row)


def geometric_taps(q, rho):
    """Geometric filter taps (1, rho, ..., rho^q) for ``ma_cov``."""
    if q < 0:
        raise BadParamsError("q must be >= 0")
    if not 0.0 <= rho < 1.0:
        raise BadParamsError("rho must lie in [0, 1)")
    return rho ** np.arange(q + 1, dtype=np.float64)


def evaluate_bounds(M, n, p, K2, t=None, m=None, support=None, sp=None):
    """Bundle every applicable bound value for one mask configuration.

    Returns a BoundValue whose ``inputs`` echo carries the weighted norms
    and, when a SmoothnessParams is given, the selected bandwidths and bias
    bounds. Used by the ``bound`` CLI subcommand.
    """
    if not isinstance(M, ToeplitzMask):
        raise BadParamsError("M must be a ToeplitzMask")
    echo = {
        "p": p,
        "n": n,
        "K_squared": K2,
        "weighted_l1": weighted_l1(M),
        "weighted_l2": weighted_l2(M),
        "note": "absolute constants set to 1; values are bound shapes",
    }
    mean_term = variance_bound_mean(M, n, K2)
    prob_term = None
    if t is not None:
        echo["t"] = t
        prob_term = variance_bound_prob(M, n, t, K2)
    if m is not None:
        echo["m"] = m
        echo["corollary_bound"] = corollary_bound(m, p, n, K2)
    if support is not None:
        echo["support"] = list(support.indices)
        echo["weighted_cardinality"] = weighted_cardinality(support)
        echo["sparse_bound"] = sparse_bound(support, n, t if t is not None else math.log(p), K2)
    if sp is not None:
        m_tap = tapering_bandwidth(sp, n, p)
        m_band = banding_bandwidth(sp, n, p)
        echo["smoothness"] = {"beta": sp.beta, "L0": sp.L0, "L": sp.L}
        echo["tapering_bandwidth"] = {"m": m_tap.m, "clamped": m_tap.clamped}
        echo["banding_bandwidth"] = {"m": m_band.m, "clamped": m_band.clamped}
        echo["bias_bound_tapering"] = bias_bound_tapering(sp, m_tap.m)
        echo["bias_bound_banding"] = bias_bound_banding(sp, m_band.m)
    return BoundValue(mean_term=mean_term, prob_term=prob_term, inputs=echo)
