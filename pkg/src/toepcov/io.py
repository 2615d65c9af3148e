"""File formats: JSON for matrices/masks/supports, binary + CSV sample
files, the sweep CSV schema, and the sweep configuration document.

Sample files are binary little-endian (magic ``TCOV0001``, then n and p as
u64, then n*p float64 row-major) unless the path ends in ``.csv``, in which
case rows are comma-separated observations, one per line. JSON numbers are
emitted with Python's shortest round-trip representation, so dump/parse
round trips are bit-exact.
"""

import json
import struct

import numpy as np

from . import bounds
from .core import ToeplitzMatrix
from .errors import BadParamsError
from .estimators import SampleMatrix
from .masks import SupportSet, ToeplitzMask

_MAGIC = b"TCOV0001"


# ---------------------------------------------------------------------------
# JSON values

def toeplitz_to_json(T):
    return {"p": T.p, "first_row": [float(v) for v in T.first_row]}


def toeplitz_from_json(obj):
    return ToeplitzMatrix(int(obj["p"]), np.asarray(obj["first_row"], dtype=np.float64))


def mask_to_json(M):
    return {"p": M.p, "weights": [float(v) for v in M.weights]}


def mask_from_json(obj):
    return ToeplitzMask(int(obj["p"]), np.asarray(obj["weights"], dtype=np.float64))


def support_to_json(S):
    return {"p": S.p, "indices": list(S.indices)}


def support_from_json(obj):
    return SupportSet(int(obj["p"]), tuple(obj["indices"]))


def dump_json(obj, fp=None):
    text = json.dumps(obj, indent=None, separators=(", ", ": "))
    if fp is not None:
        fp.write(text + "\n")
    return text


def load_json_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def save_json_file(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        dump_json(obj, fh)


# ---------------------------------------------------------------------------
# Sample matrices

def save_samples(X, path):
    """Write a SampleMatrix; `.csv` extension selects the text format."""
    if str(path).endswith(".csv"):
        np.savetxt(path, X.rows, delimiter=",", fmt="%.17g")
        return
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<QQ", X.n, X.p))
        fh.write(X.rows.astype("<f8", copy=False).tobytes())


def load_samples(path):
    if str(path).endswith(".csv"):
        rows = np.loadtxt(path, delimiter=",", ndmin=2)
        return SampleMatrix.from_rows(rows)
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != _MAGIC:
            raise BadParamsError(f"{path}: not a sample file (bad magic {magic!r})")
        n, p = struct.unpack("<QQ", fh.read(16))
        data = np.frombuffer(fh.read(), dtype="<f8")
    if data.size != n * p:
        raise BadParamsError(f"{path}: expected {n * p} values, found {data.size}")
    return SampleMatrix(int(n), int(p), data.reshape(int(n), int(p)))


# ---------------------------------------------------------------------------
# Covariance model configuration

def build_covariance(cfg, p):
    """Build the ToeplitzMatrix described by a covariance model document.

    Accepted forms: {"model": "geometric", "rho", ["scale"]},
    {"model": "polynomial", "beta", ["scale"]},
    {"model": "sparse", "taps": [...] | "q" + "rho"},
    {"model": "identity"}, {"model": "file", "path"},
    or an inline matrix {"p", "first_row"}.
    """
    if "first_row" in cfg:
        T = toeplitz_from_json(cfg)
        if T.p != p:
            raise BadParamsError(f"inline covariance has p={T.p}, expected {p}")
        return T
    model = cfg.get("model")
    if model == "geometric":
        return bounds.geometric_cov(p, float(cfg["rho"]), float(cfg.get("scale", 1.0)))
    if model == "polynomial":
        return bounds.polynomial_cov(p, float(cfg["beta"]), float(cfg.get("scale", 1.0)))
    if model == "sparse":
        if "taps" in cfg:
            taps = np.asarray(cfg["taps"], dtype=np.float64)
        else:
            taps = bounds.geometric_taps(int(cfg["q"]), float(cfg["rho"]))
        return bounds.ma_cov(p, taps)
    if model == "identity":
        row = np.zeros(p)
        row[0] = 1.0
        return ToeplitzMatrix(p, row)
    if model == "file":
        T = toeplitz_from_json(load_json_file(cfg["path"]))
        if T.p != p:
            raise BadParamsError(f"{cfg['path']}: covariance has p={T.p}, expected {p}")
        return T
    raise BadParamsError(f"unknown covariance model: {model!r}")


# ---------------------------------------------------------------------------
# Sweep CSV

SWEEP_COLUMNS = ("p", "n", "mask", "m_or_support", "trials", "failures",
                 "mean_error", "std_error", "mean_error_psd",
                 "mean_error_sample_cov", "bound_mean", "bias_sup",
                 "K_squared", "seed")


def sweep_csv_lines(records):
    yield ",".join(SWEEP_COLUMNS)
    for rec in records:
        yield ",".join(str(getattr(rec, col)) for col in SWEEP_COLUMNS)


def write_sweep_csv(records, path):
    with open(path, "w", encoding="utf-8") as fh:
        for line in sweep_csv_lines(records):
            fh.write(line + "\n")


def read_sweep_csv(path):
    """Read a sweep CSV back into a list of plain dicts (numbers parsed)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    header = lines[0].split(",")
    if tuple(header) != SWEEP_COLUMNS:
        raise BadParamsError(f"{path}: unexpected sweep CSV header")
    out = []
    for ln in lines[1:]:
        parts = ln.split(",")
        rec = dict(zip(SWEEP_COLUMNS, parts))
        for key in ("p", "n", "trials", "failures", "seed"):
            rec[key] = int(rec[key])
        for key in ("mean_error", "std_error", "mean_error_psd",
                    "mean_error_sample_cov", "bound_mean", "bias_sup", "K_squared"):
            rec[key] = float(rec[key])
        out.append(rec)
    return out
