"""Deterministic parallel Monte Carlo sweeps over (n, p, mask) cells.

Each cell draws ``trials`` independent sample sets, forms the masked
diagonal-averaged estimate, and records spectral-norm errors of (a) the
masked estimate against the masked truth, (b) its PSD projection against
the truth, and (c) the raw sample covariance against the truth, together
with the mean-bound shape and the masking bias on the 4p density grid.

Every trial's random stream is keyed by (master seed, cell tag, trial
index), and aggregation follows trial order, so results are bit-identical
across runs and across worker counts. TOEPCOV_THREADS caps parallelism.
"""

import hashlib
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import io
from .bounds import variance_bound_mean
from .core import (GridKind, ToeplitzMatrix, _power_norm_array, density_grid,
                   psd_project)
from .errors import (BadParamsError, DegenerateAxisError, NonConvergedError,
                     ToepcovError)
from .estimators import diagonal_average, sample_covariance
from .masks import banding_mask, ones_mask, support_mask, tapering_mask, SupportSet
from .sampling import Family, SamplerSpec, sample

FAILURE_FRACTION_LIMIT = 0.10


@dataclass(frozen=True, order=True)
class MaskSpec:
    """Mask descriptor used in sweep grids: banding/tapering/support/ones."""

    kind: str
    m: int = None
    support: tuple = None

    def __post_init__(self):
        if self.kind not in ("banding", "tapering", "support", "ones"):
            raise BadParamsError(f"unknown mask kind: {self.kind!r}")
        if self.kind in ("banding", "tapering") and (self.m is None or self.m < 1):
            raise BadParamsError(f"{self.kind} mask needs a bandwidth m >= 1")
        if self.kind == "support":
            if self.support is None:
                raise BadParamsError("support mask needs indices (may be empty)")
            object.__setattr__(self, "support", tuple(int(i) for i in self.support))
        # normalize unused fields so ordering and tags are well defined
        if self.kind != "support":
            object.__setattr__(self, "support", ())
        if self.kind in ("support", "ones"):
            object.__setattr__(self, "m", 0)

    def build(self, p):
        if self.kind == "banding":
            return banding_mask(p, self.m)
        if self.kind == "tapering":
            return tapering_mask(p, self.m)
        if self.kind == "support":
            return support_mask(SupportSet(p, self.support))
        return ones_mask(p)

    @property
    def m_or_support(self):
        if self.kind in ("banding", "tapering"):
            return str(self.m)
        if self.kind == "support":
            return ";".join(str(i) for i in self.support)
        return ""

    @property
    def tag(self):
        return f"{self.kind}:{self.m_or_support}"


@dataclass(frozen=True)
class SweepConfig:
    """Full sweep description; see README for the JSON document schema."""

    seed: int
    trials: int
    family: Family
    covariance: dict
    n_grid: tuple
    p_grid: tuple
    masks: tuple
    output: str = None
    c: float = 1.0
    k_squared: float = None
    center: bool = False

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "n_grid", tuple(int(v) for v in self.n_grid))
        object.__setattr__(self, "p_grid", tuple(int(v) for v in self.p_grid))
        object.__setattr__(self, "masks", tuple(self.masks))
        if self.trials < 2:
            raise BadParamsError("trials must be >= 2")
        if not self.n_grid or not self.p_grid or not self.masks:
            raise BadParamsError("n, p and mask grids must be nonempty")
        if any(n < 1 for n in self.n_grid) or any(p < 1 for p in self.p_grid):
            raise BadParamsError("grid values must be positive")

    @classmethod
    def from_json(cls, obj):
        masks = tuple(
            MaskSpec(kind=m["kind"], m=m.get("m"),
                     support=tuple(m["indices"]) if "indices" in m else None)
            for m in obj["grid"]["masks"])
        # sampler fields may be flat or nested under a "sampler" template
        sampler = obj.get("sampler", {})
        family = obj.get("family", sampler.get("family"))
        covariance = obj.get("covariance", sampler.get("covariance"))
        if covariance == "identity":
            covariance = {"model": "identity"}
        seed = obj.get("seed", sampler.get("seed"))
        if family is None or covariance is None or seed is None:
            raise BadParamsError("config needs family, covariance and seed "
                                 "(flat or under \"sampler\")")
        return cls(seed=int(seed), trials=int(obj["trials"]),
                   family=family, covariance=dict(covariance),
                   n_grid=tuple(obj["grid"]["n"]), p_grid=tuple(obj["grid"]["p"]),
                   masks=masks, output=obj.get("output"),
                   c=float(obj.get("c", sampler.get("c", 1.0))),
                   k_squared=obj.get("k_squared", sampler.get("k_squared")),
                   center=bool(obj.get("center", False)))


@dataclass(frozen=True)
class SweepRecord:
    """One Monte Carlo cell: errors, bound shape, bias, and bookkeeping."""

    p: int
    n: int
    mask: str
    m_or_support: str
    trials: int
    failures: int
    mean_error: float
    std_error: float
    mean_error_psd: float
    mean_error_sample_cov: float
    bound_mean: float
    bias_sup: float
    K_squared: float
    seed: int


class CellFailure(ToepcovError):
    """A sweep cell could not produce aggregates."""


def _trial_seed(master_seed, cell_tag, trial):
    material = f"{master_seed}|{cell_tag}|{trial}".encode()
    return int.from_bytes(hashlib.blake2b(material, digest_size=8).digest(), "little")


def _cell_tag(p, n, mask_spec):
    return f"p={p};n={n};mask={mask_spec.tag}"


class _Cell:
    """Derived per-cell materials shared by all trials."""

    def __init__(self, cfg, p, n, mask_spec):
        self.cfg = cfg
        self.p, self.n, self.mask_spec = p, n, mask_spec
        self.tag = _cell_tag(p, n, mask_spec)
        self.sigma = io.build_covariance(cfg.covariance, p)
        self.mask = mask_spec.build(p)
        self.masked_sigma = ToeplitzMatrix(p, self.mask.weights * self.sigma.first_row)
        self.spec = SamplerSpec(cfg.family, self.sigma, seed=0,
                                K_squared=cfg.k_squared, c=cfg.c)
        self.bound_mean = variance_bound_mean(self.mask, n, self.spec.K_squared)
        bias_row = self.sigma.first_row - self.masked_sigma.first_row
        bias_density = density_grid(ToeplitzMatrix(p, bias_row), GridKind.FOUR_P).values
        self.bias_sup = float(np.max(np.abs(bias_density)))
        self.mask_covers_sigma = bool(
            np.array_equal(self.masked_sigma.first_row, self.sigma.first_row))
        self.dense_sigma = self.sigma.dense()

    def run_trial(self, trial):
        """Errors (masked, psd-projected, sample-cov) for one keyed trial."""
        spec = self.spec.with_seed(_trial_seed(self.cfg.seed, self.tag, trial))
        X = sample(spec, self.n)
        cov = sample_covariance(X, center=self.cfg.center)
        masked = ToeplitzMatrix(
            self.p, self.mask.weights * diagonal_average(cov).first_row)
        e_masked = _toeplitz_err(masked, self.masked_sigma)
        proj = psd_project(masked)
        if proj is masked and self.mask_covers_sigma:
            # nothing was clipped and the masked truth is the truth, so the
            # projected error is the same matrix norm as e_masked
            e_psd = e_masked
        else:
            e_psd = _toeplitz_err(proj, self.sigma)
        diff = cov.entries - self.dense_sigma
        e_cov = _power_norm_array(np.ascontiguousarray(diff))
        return e_masked, e_psd, e_cov


def _toeplitz_err(A, B):
    diff = ToeplitzMatrix(A.p, A.first_row - B.first_row)
    return _power_norm_array(np.ascontiguousarray(diff.dense()))


def _run_chunk(cfg, p, n, mask_spec, lo, hi):
    """Trials [lo, hi) of one cell; the unit of work shipped to a worker."""
    cell = _Cell(cfg, p, n, mask_spec)
    values, failed = [], []
    for trial in range(lo, hi):
        try:
            values.append(cell.run_trial(trial))
        except NonConvergedError:
            failed.append(trial)
    return values, failed


def _aggregate(cfg, p, n, mask_spec, values, failed):
    n_failed = len(failed)
    if n_failed > FAILURE_FRACTION_LIMIT * cfg.trials or not values:
        raise CellFailure(
            f"cell {_cell_tag(p, n, mask_spec)}: {n_failed}/{cfg.trials} trials failed")
    arr = np.asarray(values)  # (trials_ok, 3) in trial order
    e1 = arr[:, 0]
    cell = _Cell(cfg, p, n, mask_spec)
    return SweepRecord(
        p=p, n=n, mask=mask_spec.kind, m_or_support=mask_spec.m_or_support,
        trials=cfg.trials, failures=n_failed,
        mean_error=float(np.mean(e1)),
        std_error=float(np.std(e1, ddof=1) / math.sqrt(e1.size)) if e1.size > 1 else 0.0,
        mean_error_psd=float(np.mean(arr[:, 1])),
        mean_error_sample_cov=float(np.mean(arr[:, 2])),
        bound_mean=cell.bound_mean, bias_sup=cell.bias_sup,
        K_squared=cell.spec.K_squared, seed=cfg.seed)


def run_cell(cfg, p, n, mask_spec):
    """Run one cell serially and aggregate it into a SweepRecord."""
    values, failed = _run_chunk(cfg, p, n, mask_spec, 0, cfg.trials)
    return _aggregate(cfg, p, n, mask_spec, values, failed)


def thread_cap():
    """Worker cap: TOEPCOV_THREADS if set, else the machine parallelism."""
    env = os.environ.get("TOEPCOV_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _cells(cfg):
    # deterministic (p, n, mask) lexicographic order
    return [(p, n, ms) for p in sorted(cfg.p_grid) for n in sorted(cfg.n_grid)
            for ms in sorted(cfg.masks)]


def run_sweep(cfg, threads=None):
    """Run all cells of a sweep, optionally in parallel.

    Returns (records, failures) where ``failures`` is a list of
    (cell tag, message) for cells that could not be aggregated. Records
    come out in deterministic (p, n, mask) order and are bit-identical
    across runs and worker counts for a fixed config.
    """
    threads = thread_cap() if threads is None else max(1, int(threads))
    cells = _cells(cfg)
    chunk = max(1, math.ceil(cfg.trials / max(1, 2 * threads)))
    tasks = []
    for ci, (p, n, ms) in enumerate(cells):
        for lo in range(0, cfg.trials, chunk):
            tasks.append((ci, p, n, ms, lo, min(lo + chunk, cfg.trials)))

    results = {}

    def fold(task, outcome):
        ci = task[0]
        results.setdefault(ci, []).append((task[4], outcome))

    if threads == 1 or len(tasks) == 1:
        for task in tasks:
            fold(task, _chunk_outcome(cfg, task))
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_chunk_outcome, cfg, task) for task in tasks]
            for task, fut in zip(tasks, futures):
                fold(task, fut.result())

    records, failures = [], []
    for ci, (p, n, ms) in enumerate(cells):
        chunks = sorted(results.get(ci, ()), key=lambda kv: kv[0])
        structural = [oc for _, oc in chunks if isinstance(oc, str)]
        if structural:
            failures.append((_cell_tag(p, n, ms), structural[0]))
            continue
        values, failed = [], []
        for _, (vals, bad) in chunks:
            values.extend(vals)
            failed.extend(bad)
        try:
            records.append(_aggregate(cfg, p, n, ms, values, failed))
        except CellFailure as exc:
            failures.append((_cell_tag(p, n, ms), str(exc)))
    return records, failures


def _chunk_outcome(cfg, task):
    _, p, n, ms, lo, hi = task
    try:
        return _run_chunk(cfg, p, n, ms, lo, hi)
    except ToepcovError as exc:  # structural: sampler/config problem
        return f"{type(exc).__name__}: {exc}"


def scaling_fit(records, axis):
    """Least-squares slope of log(mean_error) against log(axis value).

    ``axis`` is one of "n", "p", "m"; records must vary only along that
    axis, with at least 3 distinct values.

    Returns
    -------
    (exponent, r_squared)
    """
    if axis not in ("n", "p", "m"):
        raise ValueError(f"axis must be n, p or m, not {axis!r}")

    def get(rec, name):
        return rec[name] if isinstance(rec, dict) else getattr(rec, name)

    recs = list(records)
    if len(recs) < 3:
        raise ValueError("need at least 3 records for a scaling fit")
    if axis == "m":
        vals = [int(get(r, "m_or_support")) for r in recs]
        frozen = ("n", "p", "mask")
    else:
        vals = [int(get(r, axis)) for r in recs]
        frozen = tuple({"n", "p"} - {axis}) + ("mask", "m_or_support")
    for name in frozen:
        if len({get(r, name) for r in recs}) > 1:
            raise ValueError(f"records vary along {name}, not only along {axis}")
    if len(set(vals)) != len(vals):
        raise DegenerateAxisError(f"axis {axis} values are not distinct")
    errs = [float(get(r, "mean_error")) for r in recs]
    if any(e <= 0 for e in errs):
        raise ValueError("mean_error must be positive for a log-log fit")

    x = np.log(np.asarray(vals, dtype=np.float64))
    y = np.log(np.asarray(errs, dtype=np.float64))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - y.mean())**2))
    r2 = 1.0 if ss_tot == 0.0 and ss_res == 0.0 else 1.0 - ss_res / ss_tot
    return float(slope), float(r2)
