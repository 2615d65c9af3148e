"""Serialization: JSON values, sample files, sweep CSV, covariance configs."""

import json

import numpy as np
import pytest

from toepcov import SampleMatrix, SupportSet, ToeplitzMask, ToeplitzMatrix
from toepcov import io
from toepcov.errors import BadParamsError


def test_toeplitz_json_round_trip_bit_exact():
    T = ToeplitzMatrix(3, [1.0, 0.1, 1e-17])
    text = io.dump_json(io.toeplitz_to_json(T))
    back = io.toeplitz_from_json(json.loads(text))
    assert np.array_equal(back.first_row, T.first_row)
    assert io.dump_json(io.toeplitz_to_json(back)) == text


def test_mask_and_support_json_round_trip():
    M = ToeplitzMask(4, [1.0, 0.5, 0.0, 0.25])
    assert np.array_equal(io.mask_from_json(io.mask_to_json(M)).weights, M.weights)
    S = SupportSet(6, (0, 2, 5))
    assert io.support_from_json(io.support_to_json(S)) == S


def test_sample_file_binary_round_trip(tmp_path, rng):
    X = SampleMatrix.from_rows(rng.standard_normal((7, 3)))
    path = tmp_path / "x.bin"
    io.save_samples(X, str(path))
    raw = path.read_bytes()
    assert raw[:8] == b"TCOV0001"
    assert int.from_bytes(raw[8:16], "little") == 7
    assert int.from_bytes(raw[16:24], "little") == 3
    back = io.load_samples(str(path))
    assert back.n == 7 and back.p == 3
    np.testing.assert_array_equal(back.rows, X.rows)


def test_sample_file_csv_round_trip(tmp_path, rng):
    X = SampleMatrix.from_rows(rng.standard_normal((4, 5)))
    path = tmp_path / "x.csv"
    io.save_samples(X, str(path))
    back = io.load_samples(str(path))
    np.testing.assert_array_equal(back.rows, X.rows)  # %.17g round-trips float64


def test_sample_file_csv_single_row(tmp_path):
    path = tmp_path / "one.csv"
    path.write_text("1.0,2.0,3.0\n")
    back = io.load_samples(str(path))
    assert back.n == 1 and back.p == 3


def test_sample_file_bad_magic(tmp_path):
    path = tmp_path / "x.bin"
    path.write_bytes(b"NOTMAGIC" + b"\0" * 16)
    with pytest.raises(BadParamsError):
        io.load_samples(str(path))


def test_build_covariance_models():
    geo = io.build_covariance({"model": "geometric", "rho": 0.5}, 4)
    np.testing.assert_array_equal(geo.first_row, [1.0, 0.5, 0.25, 0.125])
    ident = io.build_covariance({"model": "identity"}, 3)
    np.testing.assert_array_equal(ident.first_row, [1.0, 0.0, 0.0])
    sparse = io.build_covariance({"model": "sparse", "q": 2, "rho": 0.5}, 6)
    assert np.all(sparse.first_row[3:] == 0) and sparse.first_row[2] > 0
    inline = io.build_covariance({"p": 2, "first_row": [2.0, 1.0]}, 2)
    np.testing.assert_array_equal(inline.first_row, [2.0, 1.0])
    with pytest.raises(BadParamsError):
        io.build_covariance({"p": 3, "first_row": [1.0, 0.0, 0.0]}, 2)
    with pytest.raises(BadParamsError):
        io.build_covariance({"model": "wishful"}, 2)


def test_sweep_csv_round_trip(tmp_path):
    from toepcov.harness import SweepRecord
    rec = SweepRecord(p=8, n=16, mask="banding", m_or_support="2", trials=6,
                      failures=0, mean_error=0.432, std_error=0.108,
                      mean_error_psd=0.56, mean_error_sample_cov=1.367,
                      bound_mean=1.51, bias_sup=0.484375, K_squared=5.14, seed=9)
    path = tmp_path / "s.csv"
    io.write_sweep_csv([rec], str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == ("p,n,mask,m_or_support,trials,failures,mean_error,std_error,"
                        "mean_error_psd,mean_error_sample_cov,bound_mean,bias_sup,"
                        "K_squared,seed")
    back = io.read_sweep_csv(str(path))
    assert back[0]["p"] == 8 and back[0]["mean_error"] == 0.432
    assert back[0]["m_or_support"] == "2"
