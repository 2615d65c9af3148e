"""Samplers: determinism, distributional checks, c.c.p. constants."""

import numpy as np
import pytest

from toepcov import (Family, NotPSDError, SamplerSpec, ToeplitzMatrix,
                     default_K_squared, identity_toeplitz, sample)
from toepcov.errors import BadParamsError
from toepcov.sampling import cholesky_factor

from conftest import dense_from_row


def test_sphere_rows_on_radius_sqrt_p():
    spec = SamplerSpec("sphere", identity_toeplitz(7), seed=5)
    X = sample(spec, 50)
    np.testing.assert_allclose(np.linalg.norm(X.rows, axis=1),
                               np.sqrt(7) * np.ones(50), atol=1e-12)


def test_sphere_requires_identity():
    with pytest.raises(BadParamsError):
        SamplerSpec("sphere", ToeplitzMatrix(3, [1.0, 0.5, 0.25]), seed=0)


def test_determinism_bit_identical():
    sigma = ToeplitzMatrix(4, [1.0, 0.5, 0.25, 0.125])
    for family in ("gaussian", "rademacher_linear"):
        spec = SamplerSpec(family, sigma, seed=77)
        assert np.array_equal(sample(spec, 20).rows, sample(spec, 20).rows)
    spec = SamplerSpec("sphere", identity_toeplitz(4), seed=77)
    assert np.array_equal(sample(spec, 20).rows, sample(spec, 20).rows)


def test_different_seeds_differ():
    sigma = identity_toeplitz(4)
    a = sample(SamplerSpec("gaussian", sigma, seed=1), 10).rows
    b = sample(SamplerSpec("gaussian", sigma, seed=2), 10).rows
    assert not np.array_equal(a, b)


def test_gaussian_covariance_monte_carlo():
    spec = SamplerSpec("gaussian", identity_toeplitz(4), seed=11)
    X = sample(spec, 10**5)
    emp = X.rows.T @ X.rows / X.n
    np.testing.assert_allclose(emp, np.eye(4), atol=0.02)


def test_rademacher_covariance_monte_carlo():
    sigma = ToeplitzMatrix(4, [1.0, 0.5, 0.25, 0.125])
    spec = SamplerSpec("rademacher_linear", sigma, seed=12)
    X = sample(spec, 10**5)
    emp = X.rows.T @ X.rows / X.n
    np.testing.assert_allclose(emp, dense_from_row(sigma.first_row), atol=0.02)


def test_rademacher_entries_are_signs():
    spec = SamplerSpec("rademacher_linear", identity_toeplitz(3), seed=4)
    X = sample(spec, 100)
    assert set(np.unique(X.rows)) == {-1.0, 1.0}


def test_mean_zero_three_standard_errors():
    for family, cov in (("gaussian", ToeplitzMatrix(3, [1.0, 0.5, 0.25])),
                        ("rademacher_linear", ToeplitzMatrix(3, [1.0, 0.5, 0.25])),
                        ("sphere", identity_toeplitz(3))):
        X = sample(SamplerSpec(family, cov, seed=31), 10**5)
        mean = X.rows.mean(axis=0)
        se = X.rows.std(axis=0, ddof=1) / np.sqrt(X.n)
        assert np.all(np.abs(mean) <= 3 * se)


def test_default_K_squared_values():
    assert default_K_squared("gaussian", identity_toeplitz(5)) == pytest.approx(2.0, rel=1e-10)
    assert default_K_squared("sphere", identity_toeplitz(5)) == 4.0
    sigma4 = ToeplitzMatrix(3, [4.0, 0.0, 0.0])
    assert default_K_squared("rademacher_linear", sigma4, c=1.0) == pytest.approx(4.0, rel=1e-10)
    assert default_K_squared("rademacher_linear", sigma4, c=2.0) == pytest.approx(16.0, rel=1e-10)


def test_spec_records_K_squared():
    sigma = ToeplitzMatrix(2, [2.0, 1.0])
    spec = SamplerSpec("gaussian", sigma, seed=0)
    assert spec.K_squared == pytest.approx(6.0, rel=1e-9)  # 2 * ||Sigma||, eigs {3,1}
    spec2 = spec.with_seed(123)
    assert spec2.K_squared == spec.K_squared and spec2.seed == 123
    override = SamplerSpec("gaussian", sigma, seed=0, K_squared=1.5)
    assert override.K_squared == 1.5


def test_not_psd_rejected_at_spec():
    with pytest.raises(NotPSDError):
        SamplerSpec("gaussian", ToeplitzMatrix(2, [1.0, 1.2]), seed=0)


def test_cholesky_jitter_handles_singular_psd():
    # (1,1) is PSD singular; the jitter retry must succeed
    B = cholesky_factor(ToeplitzMatrix(2, [1.0, 1.0]))
    np.testing.assert_allclose(B @ B.T, [[1, 1], [1, 1]], atol=1e-5)


def test_cholesky_rejects_indefinite():
    with pytest.raises(NotPSDError):
        cholesky_factor(ToeplitzMatrix(2, [1.0, 1.2]))


def test_family_enum_round_trip():
    assert Family("gaussian") is Family.GAUSSIAN
    spec = SamplerSpec(Family.GAUSSIAN, identity_toeplitz(2), seed=0)
    assert spec.family is Family.GAUSSIAN
