"""Seeded samplers with known Toeplitz covariance.

Three families, all satisfying the convex concentration property with a
recorded constant K^2:

* ``gaussian``          B g with g standard normal, K^2 = 2 ||Sigma||
* ``rademacher_linear`` B eps with eps uniform on {-1, +1}^p, covariance
                        exactly B B^T, K^2 = c^2 ||Sigma|| (c configurable)
* ``sphere``            uniform on the radius-sqrt(p) sphere, identity
                        covariance, K^2 = 4

Randomness comes from counter-based Philox streams keyed by the sampler's
seed,
with normals via the inverse normal CDF, so every draw is a pure function
of (seed, family, covariance, n) regardless of caller threading.
"""

import enum
import functools
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.random import Generator, Philox
from scipy.special import ndtri

from .core import GridKind, ToeplitzMatrix, density_grid, spectral_norm_exact, DenseSymmetric
from .errors import BadParamsError, NotPSDError
from .estimators import SampleMatrix

_U64_MASK = (1 << 64) - 1


class Family(enum.Enum):
    GAUSSIAN = "gaussian"
    RADEMACHER_LINEAR = "rademacher_linear"
    SPHERE = "sphere"


def toeplitz_spectral_norm(T):
    """Exact spectral norm of a ToeplitzMatrix (dense power iteration)."""
    return spectral_norm_exact(DenseSymmetric(T.p, T.dense()))


def default_K_squared(family, T, c=1.0):
    """Recorded convex-concentration constant K^2 for a sampler family."""
    family = Family(family)
    if family == Family.GAUSSIAN:
        return 2.0 * toeplitz_spectral_norm(T)
    if family == Family.SPHERE:
        return 4.0
    return c * c * toeplitz_spectral_norm(T)


def _is_identity(T):
    row = np.zeros(T.p)
    row[0] = 1.0
    return np.array_equal(T.first_row, row)


@dataclass(frozen=True)
class SamplerSpec:
    """Sampler family + covariance + seed + recorded c.c.p. constant.

    ``K_squared=None`` computes the family default at construction. The
    covariance must look positive semidefinite: the circulant-grid density
    may not dip below -1e-10 of its own max magnitude (Cholesky inside
    ``sample`` is the final arbiter).
    """

    family: Family
    covariance: ToeplitzMatrix
    seed: int
    K_squared: float = None
    c: float = field(default=1.0, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "seed", int(self.seed))
        if not 0 <= self.seed <= _U64_MASK:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.family == Family.SPHERE and not _is_identity(self.covariance):
            raise BadParamsError("sphere sampler requires the identity covariance")
        vals = density_grid(self.covariance, GridKind.CIRCULANT).values
        scale = float(np.max(np.abs(vals)))
        if float(np.min(vals)) < -1e-10 * scale:
            raise NotPSDError(
                "covariance spectral density is negative on the circulant grid")
        if self.K_squared is None:
            object.__setattr__(
                self, "K_squared", default_K_squared(self.family, self.covariance, self.c))
        elif not self.K_squared > 0:
            raise BadParamsError("K_squared must be positive")

    def with_seed(self, seed):
        """Copy of this spec with a new stream seed (K^2 kept as recorded)."""
        return replace(self, seed=int(seed))


@functools.lru_cache(maxsize=8)
def _cholesky_cached(p, row_bytes):
    sigma = np.frombuffer(row_bytes, dtype=np.float64)
    dense = ToeplitzMatrix(p, sigma).dense()
    try:
        return np.linalg.cholesky(dense)
    except np.linalg.LinAlgError:
        pass
    # tolerate rounding-level indefiniteness only: one retry with a jitter
    # of 1e-12 * trace/p on the diagonal
    jitter = 1e-12 * np.trace(dense) / p
    try:
        return np.linalg.cholesky(dense + jitter * np.eye(p))
    except np.linalg.LinAlgError:
        raise NotPSDError("covariance is not positive semidefinite "
                          "(Cholesky failed after jitter)") from None


def cholesky_factor(T):
    """Lower Cholesky factor of the dense expansion, with the jitter policy."""
    return _cholesky_cached(T.p, T.first_row.tobytes())


def _uniform_open(rng, shape):
    # uniforms in (0, 1): nudge exact zeros so ndtri stays finite
    u = rng.random(shape)
    return np.where(u == 0.0, 2.0**-54, u)


def sample(spec, n):
    """Draw n i.i.d. observations according to ``spec``.

    Output is a deterministic function of (seed, family, covariance, n).
    """
    if n < 1:
        raise BadParamsError("n must be >= 1")
    p = spec.covariance.p
    rng = Generator(Philox(key=int(spec.seed)))
    if spec.family == Family.GAUSSIAN:
        g = ndtri(_uniform_open(rng, (n, p)))
        rows = g @ cholesky_factor(spec.covariance).T
    elif spec.family == Family.RADEMACHER_LINEAR:
        eps = rng.integers(0, 2, size=(n, p)).astype(np.float64) * 2.0 - 1.0
        rows = eps @ cholesky_factor(spec.covariance).T
    else:  # sphere, radius sqrt(p)
        g = ndtri(_uniform_open(rng, (n, p)))
        norms = np.linalg.norm(g, axis=1)
        if np.any(norms == 0.0):  # all-zero row: probability ~2^-53 per entry
            g[norms == 0.0, 0] = 1.0
            norms = np.linalg.norm(g, axis=1)
        rows = g * (np.sqrt(p) / norms)[:, None]
    return SampleMatrix(n, p, rows)
