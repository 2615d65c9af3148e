"""Masked Toeplitz covariance estimation from few samples.

Diagonal-averaged Toeplitz estimators with banding/tapering/sparse masks,
a circulant-extension PSD projection, closed-form error-bound evaluators,
seeded samplers with the convex concentration property, and a
deterministic Monte Carlo sweep harness with a CLI frontend.
"""

from ._backend import BACKEND_NAME
from .bounds import (BandwidthChoice, BoundValue, SmoothnessParams,
                     banding_bandwidth, bias_bound_banding, bias_bound_tapering,
                     corollary_bound, corollary_norm_bounds, geometric_cov,
                     geometric_taps, ma_cov, polynomial_cov, smooth_class_cov,
                     sparse_bound, tapering_bandwidth, variance_bound_mean,
                     variance_bound_prob)
from .core import (CirculantMatrix, DenseSymmetric, DensityGrid, GridKind,
                   ToeplitzMatrix, circulant_extend, circulant_grid_points,
                   density_grid, four_p_grid_points, identity_toeplitz,
                   psd_project, spectral_density, spectral_norm_bound,
                   spectral_norm_exact)
from .errors import (BadBandwidthError, BadParamsError, DegenerateAxisError,
                     DimensionMismatchError, NonConvergedError, NotPSDError,
                     ToepcovError, TooFewSamplesError)
from .estimators import (SampleMatrix, diagonal_average, estimation_error,
                         masked_toeplitz_estimate, sample_covariance)
from .harness import (MaskSpec, SweepConfig, SweepRecord, run_cell, run_sweep,
                      scaling_fit)
from .masks import (SupportSet, ToeplitzMask, apply_mask, banding_mask,
                    ones_mask, support_mask, tapering_mask,
                    weighted_cardinality, weighted_l1, weighted_l2)
from .sampling import Family, SamplerSpec, default_K_squared, sample

__version__ = "0.1.0"
__all__ = [name for name in dir() if not name.startswith("_")]
