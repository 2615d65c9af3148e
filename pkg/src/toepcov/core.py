"""Symmetric Toeplitz and circulant matrix algebra.

A symmetric Toeplitz matrix is stored by its first row. Its trigonometric
spectral density evaluates the matrix spectrum: the density at the
(2p-1)-point circulant grid gives the eigenvalues of the circulant
extension exactly, and twice the max absolute density over a 4p-point grid
upper-bounds the spectral norm. Those two grid identities drive the
spectral-norm bound and the positive-semidefinite projection implemented
here.
"""

import enum
import functools
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DimensionMismatchError, NonConvergedError

DEFAULT_POWER_TOL = 1e-10
DEFAULT_DIM_CAP = 4096


def _require_finite(arr, what):
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} must be finite")


def _as_readonly(arr):
    out = np.array(arr, dtype=np.float64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class ToeplitzMatrix:
    """Symmetric Toeplitz matrix of size p, stored by its first row."""

    p: int
    first_row: np.ndarray

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be >= 1")
        row = _as_readonly(self.first_row)
        if row.shape != (self.p,):
            raise DimensionMismatchError(
                f"first_row has length {row.shape}, expected ({self.p},)")
        _require_finite(row, "first_row")
        object.__setattr__(self, "first_row", row)

    def dense(self):
        """Dense p x p expansion T[s, t] = first_row[|s - t|]."""
        return self.first_row[_abs_offsets(self.p)]


@dataclass(frozen=True)
class DenseSymmetric:
    """Full symmetric p x p matrix; symmetry is enforced on construction."""

    p: int
    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.float64)
        if a.shape != (self.p, self.p):
            raise DimensionMismatchError(
                f"entries have shape {a.shape}, expected ({self.p}, {self.p})")
        _require_finite(a, "entries")
        scale = np.max(np.abs(a)) if a.size else 0.0
        if np.max(np.abs(a - a.T)) > 1e-8 * max(scale, 1e-300):
            raise ValueError("matrix is not symmetric")
        a = (a + a.T) / 2.0  # exact symmetry, removes BLAS round-off skew
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)


@dataclass(frozen=True)
class CirculantMatrix:
    """Real symmetric circulant of size 2p-1, stored by its first row."""

    size: int
    first_row: np.ndarray

    def __post_init__(self):
        row = _as_readonly(self.first_row)
        if self.size < 1 or self.size % 2 == 0:
            raise ValueError("size must be odd and >= 1 (it equals 2p-1)")
        if row.shape != (self.size,):
            raise DimensionMismatchError(
                f"first_row has length {row.shape}, expected ({self.size},)")
        _require_finite(row, "first_row")
        if not np.array_equal(row[1:], row[1:][::-1]):
            raise ValueError("first_row must satisfy row[r] == row[size-r]")
        object.__setattr__(self, "first_row", row)

    def dense(self):
        """Dense expansion C[s, t] = first_row[(t - s) mod size]."""
        i = np.arange(self.size)
        return self.first_row[(i[None, :] - i[:, None]) % self.size]


class GridKind(enum.Enum):
    FOUR_P = "four_p"
    CIRCULANT = "circulant"


@dataclass(frozen=True)
class DensityGrid:
    """Spectral density sampled on one of the two canonical grids."""

    kind: GridKind
    points: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "points", _as_readonly(self.points))
        object.__setattr__(self, "values", _as_readonly(self.values))


@functools.lru_cache(maxsize=16)
def _abs_offsets(p):
    i = np.arange(p)
    out = np.abs(i[:, None] - i[None, :])
    out.setflags(write=False)
    return out


def identity_toeplitz(p):
    """Identity matrix as a ToeplitzMatrix."""
    row = np.zeros(p)
    row[0] = 1.0
    return ToeplitzMatrix(p, row)


def spectral_density(T, x):
    """Spectral density f(x) = sigma_0 + 2 sum_{r>=1} sigma_r cos(r x).

    Parameters
    ----------
    T : ToeplitzMatrix
    x : float or array_like
        Angular frequencies in [-pi, pi] (any finite real is accepted;
        f is 2pi-periodic and even).

    Returns
    -------
    float or ndarray matching the shape of ``x``.
    """
    x_arr = np.asarray(x, dtype=np.float64)
    _require_finite(x_arr, "x")
    r = np.arange(1, T.p)
    vals = T.first_row[0] + 2.0 * np.cos(np.multiply.outer(x_arr, r)) @ T.first_row[1:]
    return float(vals) if np.isscalar(x) or x_arr.ndim == 0 else vals


def four_p_grid_points(p):
    """The 4p frequencies x_k = (k - 2p) pi / (2p), k = 1..4p.

    Spacing pi/(2p) over a full period: 4x oversampling for a cosine
    polynomial of order < p, which is what makes the factor-2 sup-norm
    bound of ``spectral_norm_bound`` valid.
    """
    k = np.arange(1, 4 * p + 1)
    return (k - 2 * p) * (np.pi / (2 * p))


def circulant_grid_points(p):
    """The 2p-1 frequencies 2 pi j / (2p - 1), j = -(p-1)..(p-1)."""
    j = np.arange(-(p - 1), p)
    return 2.0 * np.pi * j / (2 * p - 1)


@functools.lru_cache(maxsize=8)
def _circulant_cos_table(p):
    # cos(r * x_j) for the circulant grid, shape (2p-1, p-1); cached because
    # the Monte Carlo harness projects one estimate per trial.
    x = circulant_grid_points(p)
    r = np.arange(1, p)
    tab = np.cos(np.multiply.outer(x, r))
    tab.setflags(write=False)
    return tab


@functools.lru_cache(maxsize=8)
def _four_p_cos_table(p):
    x = four_p_grid_points(p)
    r = np.arange(1, p)
    tab = np.cos(np.multiply.outer(x, r))
    tab.setflags(write=False)
    return tab


def _density_on_table(first_row, table):
    return first_row[0] + 2.0 * (table @ first_row[1:])


def density_grid(T, kind):
    """Evaluate the spectral density of ``T`` on a canonical grid.

    ``GridKind.CIRCULANT`` gives the eigenvalues of ``circulant_extend(T)``;
    ``GridKind.FOUR_P`` is the oversampled grid behind the norm bound.
    """
    if kind == GridKind.FOUR_P:
        points = four_p_grid_points(T.p)
        values = _density_on_table(T.first_row, _four_p_cos_table(T.p))
    elif kind == GridKind.CIRCULANT:
        points = circulant_grid_points(T.p)
        values = _density_on_table(T.first_row, _circulant_cos_table(T.p))
    else:
        raise ValueError(f"unknown grid kind: {kind!r}")
    return DensityGrid(kind, points, values)


def spectral_norm_bound(T):
    """Upper bound 2 max_k |f(x_k)| >= ||T|| over the 4p grid."""
    values = _density_on_table(T.first_row, _four_p_cos_table(T.p))
    return 2.0 * float(np.max(np.abs(values)))


def _power_norm_array(a, tol=DEFAULT_POWER_TOL, max_iter=None):
    # a: symmetric float64 C-contiguous array, not revalidated here.
    p = a.shape[0]
    cap = (10 * p + 1000) if max_iter is None else int(max_iter)
    for salt in (0, 1):
        v0 = _backend.start_vector(p, salt)
        theta, iters, status = _backend.power_norm(a, v0, tol, cap)
        if status in (_backend.CONVERGED, _backend.STAGNATED):
            return theta
        if status == _backend.MAXITER:
            raise NonConvergedError(
                f"power iteration did not converge within {cap} iterations",
                iterations=iters, estimate=theta)
        # ZERO_ITERATE: the start vector landed in the kernel; retry once
        # with a differently salted start before declaring the matrix zero.
    return 0.0


def spectral_norm_exact(A, tol=DEFAULT_POWER_TOL, max_iter=None,
                        dim_cap=DEFAULT_DIM_CAP):
    """Spectral norm (largest |eigenvalue|) of a symmetric matrix.

    Deterministic power iteration with magnitude tracking: the estimate is
    ||A v_k|| for the normalized iterate, which converges to max|eig| even
    for eigenvalue pairs of opposite sign, and the iteration stops when the
    estimate's relative change drops below ``tol``.

    Parameters
    ----------
    A : DenseSymmetric
    tol : float
        Relative tolerance on the change of the magnitude estimate.
    max_iter : int, optional
        Iteration cap; defaults to 10 p + 1000.

    Raises
    ------
    NonConvergedError
        If the cap is reached before the tolerance is met.
    """
    if A.p > dim_cap:
        raise ValueError(f"dimension {A.p} exceeds cap {dim_cap}")
    return _power_norm_array(np.ascontiguousarray(A.entries),
                             tol=tol, max_iter=max_iter)


def circulant_extend(T):
    """Embed ``T`` in the (2p-1)-circulant whose eigenvalues are the
    circulant-grid density values.

    The first row continues the Toeplitz coefficients by wrap-around:
    row[r] = sigma_r for r <= p-1 and row[r] = sigma_{2p-1-r} afterwards.
    """
    row = np.concatenate([T.first_row, T.first_row[1:][::-1]])
    return CirculantMatrix(2 * T.p - 1, row)


def psd_project(T):
    """Nearest-in-spirit positive semidefinite Toeplitz matrix via
    circulant eigenvalue clipping.

    Evaluates the density on the circulant grid, clips negative values to
    zero, reconstructs the circulant first row by the inverse DFT of the
    clipped eigenvalue sequence, and restricts to the leading p x p block.
    The even symmetry of the eigenvalue sequence makes the inverse DFT real
    term-by-term, so it is evaluated directly as an O(p^2) cosine sum.

    The full (2p-1) reconstruction is PSD by construction (all eigenvalues
    are >= 0), hence so is the returned leading block.
    """
    p = T.p
    size = 2 * p - 1
    values = _density_on_table(T.first_row, _circulant_cos_table(p))
    clipped = np.where(values < 0.0, 0.0, values)
    if np.array_equal(clipped, values):
        return T  # density already nonnegative on the grid: fixed point
    # values[j + p - 1] is f(2 pi j / (2p-1)); fold the symmetric pair
    # j and -j into a single cosine term per positive j.
    lam0 = clipped[p - 1]
    lam_pos = clipped[p:]
    s = np.arange(p)
    j = np.arange(1, p)
    cos_js = np.cos(np.multiply.outer(s, j) * (2.0 * np.pi / size))
    first_row = (lam0 + 2.0 * (cos_js @ lam_pos)) / size
    return ToeplitzMatrix(p, first_row)


def toeplitz_diff_norm(A, B, tol=DEFAULT_POWER_TOL, max_iter=None):
    """Spectral norm of A - B for two ToeplitzMatrix values of equal p."""
    if A.p != B.p:
        raise DimensionMismatchError(f"p mismatch: {A.p} vs {B.p}")
    diff = ToeplitzMatrix(A.p, A.first_row - B.first_row)
    return _power_norm_array(np.ascontiguousarray(diff.dense()),
                             tol=tol, max_iter=max_iter)
