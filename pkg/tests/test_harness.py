"""Monte Carlo harness: cells, sweeps, determinism, scaling fits."""

import numpy as np
import pytest
from scipy import integrate

from toepcov import DegenerateAxisError, io
from toepcov.harness import (MaskSpec, SweepConfig, _cells, run_cell, run_sweep,
                             scaling_fit)


def small_config(**overrides):
    base = dict(seed=9, trials=6, family="gaussian",
                covariance={"model": "geometric", "rho": 0.5},
                n_grid=(16,), p_grid=(8,), masks=(MaskSpec("banding", m=2),))
    base.update(overrides)
    return SweepConfig(**base)


def test_mask_spec_build_and_tags():
    assert MaskSpec("banding", m=3).tag == "banding:3"
    assert MaskSpec("support", support=(0, 2)).m_or_support == "0;2"
    assert MaskSpec("ones").m_or_support == ""
    with pytest.raises(Exception):
        MaskSpec("banding")


def test_config_from_json_and_validation():
    obj = {"seed": 3, "trials": 4, "family": "gaussian",
           "covariance": {"model": "identity"},
           "grid": {"n": [8, 4], "p": [4], "masks": [{"kind": "ones"},
                                                     {"kind": "support", "indices": [0, 1]}]},
           "output": "out.csv"}
    cfg = SweepConfig.from_json(obj)
    assert cfg.n_grid == (8, 4) and cfg.masks[1].support == (0, 1)
    with pytest.raises(Exception):
        small_config(trials=1)
    with pytest.raises(Exception):
        small_config(n_grid=())


def test_single_cell_sweep_matches_run_cell():
    cfg = small_config()
    rec = run_cell(cfg, 8, 16, cfg.masks[0])
    records, failures = run_sweep(cfg, threads=1)
    assert not failures and len(records) == 1
    assert records[0] == rec


def test_sweep_deterministic_across_runs_and_threads():
    cfg = small_config(n_grid=(8, 16), masks=(MaskSpec("banding", m=2), MaskSpec("ones")))
    r1, _ = run_sweep(cfg, threads=2)
    r2, _ = run_sweep(cfg, threads=1)
    r3, _ = run_sweep(cfg, threads=2)
    lines = lambda rs: list(io.sweep_csv_lines(rs))
    assert lines(r1) == lines(r2) == lines(r3)


def test_sweep_lexicographic_order():
    cfg = small_config(n_grid=(32, 16), p_grid=(16, 8))
    records, failures = run_sweep(cfg, threads=2)
    assert not failures
    assert [(r.p, r.n) for r in records] == [(8, 16), (8, 32), (16, 16), (16, 32)]


def test_zero_mask_cell_has_zero_error():
    cfg = small_config(masks=(MaskSpec("support", support=()),))
    rec = run_cell(cfg, 8, 16, cfg.masks[0])
    assert rec.mean_error == 0.0 and rec.std_error == 0.0
    assert rec.bound_mean == 0.0
    # the PSD projection of the zero estimate is zero, so its error is ||Sigma||
    assert rec.mean_error_psd > 0


def test_sweep_record_fields():
    cfg = small_config()
    rec = run_cell(cfg, 8, 16, cfg.masks[0])
    assert rec.trials == cfg.trials and rec.failures == 0
    assert rec.mask == "banding" and rec.m_or_support == "2"
    assert rec.seed == cfg.seed
    assert rec.std_error >= 0 and rec.K_squared > 0
    # bias on the 4p grid: mask kills lags >= 3 of the geometric covariance
    assert rec.bias_sup > 0


def test_cell_failure_reported_not_raised():
    # sphere family with a non-identity covariance is a structural failure
    cfg = small_config(family="sphere")
    records, failures = run_sweep(cfg, threads=1)
    assert not records and len(failures) == 1
    assert "BadParamsError" in failures[0][1]


def test_psd_error_within_bias_slack_envelope():
    cfg = small_config(trials=12, covariance={"model": "sparse", "q": 2, "rho": 0.6})
    rec = run_cell(cfg, 8, 32, MaskSpec("banding", m=2))
    assert rec.bias_sup == pytest.approx(0.0, abs=1e-12)
    assert rec.mean_error_psd <= rec.mean_error + 3 * rec.bias_sup + 5 * rec.std_error


def test_one_dimensional_cell_mean_absolute_chi_square_deviation():
    # p = n = 1, identity covariance, all-ones mask: the masked error is
    # |g^2 - 1| per trial; its expectation from the quadrature oracle
    expected, _ = integrate.quad(
        lambda x: abs(x * x - 1) * np.exp(-x * x / 2) / np.sqrt(2 * np.pi), -12, 12)
    cfg = small_config(trials=4000, covariance={"model": "identity"},
                      n_grid=(1,), p_grid=(1,), masks=(MaskSpec("ones"),))
    rec = run_cell(cfg, 1, 1, cfg.masks[0])
    assert rec.mean_error == pytest.approx(expected, abs=3.5 * rec.std_error)
    assert abs(rec.mean_error - expected) <= 0.05


def test_scaling_fit_synthetic_inverse_sqrt():
    recs = [dict(p=512, n=n, mask="banding", m_or_support="8",
                 mean_error=3.0 / np.sqrt(n)) for n in (32, 64, 128, 256)]
    exponent, r2 = scaling_fit(recs, "n")
    assert exponent == pytest.approx(-0.5, abs=1e-12)
    assert r2 == pytest.approx(1.0, abs=1e-12)


def test_scaling_fit_synthetic_sqrt_m():
    recs = [dict(p=64, n=32, mask="banding", m_or_support=str(m),
                 mean_error=0.2 * np.sqrt(m)) for m in (2, 4, 8, 16)]
    exponent, r2 = scaling_fit(recs, "m")
    assert exponent == pytest.approx(0.5, abs=1e-12)


def test_scaling_fit_errors():
    base = dict(p=8, n=4, mask="ones", m_or_support="", mean_error=1.0)
    with pytest.raises(DegenerateAxisError):
        scaling_fit([dict(base), dict(base), dict(base)], "n")
    with pytest.raises(ValueError):
        scaling_fit([dict(base, n=1), dict(base, n=2)], "n")
    varying = [dict(base, n=k, p=k) for k in (1, 2, 4)]
    with pytest.raises(ValueError):
        scaling_fit(varying, "n")
    zero = [dict(base, n=k, mean_error=0.0) for k in (1, 2, 4)]
    with pytest.raises(ValueError):
        scaling_fit(zero, "n")


def test_config_from_json_nested_sampler():
    obj = {"trials": 4,
           "sampler": {"family": "gaussian", "seed": 17, "covariance": "identity",
                       "c": 2.0},
           "grid": {"n": [4], "p": [4], "masks": [{"kind": "ones"}]}}
    cfg = SweepConfig.from_json(obj)
    assert cfg.seed == 17 and cfg.family.value == "gaussian" and cfg.c == 2.0
    assert cfg.covariance == {"model": "identity"}


def test_mean_error_monotone_in_n():
    cfg = small_config(trials=30, p_grid=(16,), n_grid=(8, 32, 128),
                       covariance={"model": "sparse", "q": 2, "rho": 0.5},
                       masks=(MaskSpec("banding", m=2),))
    records, failures = run_sweep(cfg, threads=2)
    assert not failures
    for a, b in zip(records, records[1:]):
        pooled = np.hypot(a.std_error, b.std_error)
        assert b.mean_error <= a.mean_error + 2 * pooled


def test_toeplitz_gain_small_scale():
    # p = 16 n with a narrow banding mask: masked error beats the raw
    # sample covariance in every cell
    cfg = small_config(trials=10, p_grid=(256,), n_grid=(16,),
                       covariance={"model": "sparse", "q": 4, "rho": 0.5},
                       masks=(MaskSpec("banding", m=4),))
    records, failures = run_sweep(cfg, threads=2)
    assert not failures
    assert records[0].mean_error < records[0].mean_error_sample_cov


def test_thread_cap_env(monkeypatch):
    from toepcov.harness import thread_cap
    monkeypatch.setenv("TOEPCOV_THREADS", "1")
    assert thread_cap() == 1
    monkeypatch.setenv("TOEPCOV_THREADS", "8")
    assert thread_cap() == 8
    monkeypatch.delenv("TOEPCOV_THREADS")
    assert thread_cap() >= 1


def test_cells_enumeration_order():
    cfg = small_config(n_grid=(4, 2), p_grid=(8, 2),
                       masks=(MaskSpec("ones"), MaskSpec("banding", m=1)))
    cells = _cells(cfg)
    assert [(p, n, ms.kind) for p, n, ms in cells] == [
        (2, 2, "banding"), (2, 2, "ones"), (2, 4, "banding"), (2, 4, "ones"),
        (8, 2, "banding"), (8, 2, "ones"), (8, 4, "banding"), (8, 4, "ones")]
