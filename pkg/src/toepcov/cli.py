"""Command-line frontend.

Subcommands: gen-cov, sample, estimate, psd-project, bound, sweep, plot.
Exit codes: 0 success, 1 computation/data error (one-line diagnostic on
stderr), 2 usage error.
"""

import argparse
import sys

import numpy as np

from . import bounds, io
from .bounds import SmoothnessParams, evaluate_bounds
from .errors import BadParamsError, ToepcovError
from .estimators import masked_toeplitz_estimate
from .harness import SweepConfig, run_sweep
from .masks import banding_mask, ones_mask, support_mask, tapering_mask
from .core import psd_project
from .sampling import SamplerSpec, sample


def _parse_mask(spec_text, p):
    """Parse band:M | taper:M | support:FILE | ones into a mask (and metadata)."""
    if spec_text == "ones":
        return ones_mask(p), None, None
    kind, _, arg = spec_text.partition(":")
    if not arg:
        raise BadParamsError(f"mask spec {spec_text!r} needs an argument after ':'")
    if kind == "band":
        m = int(arg)
        return banding_mask(p, m), m, None
    if kind == "taper":
        m = int(arg)
        return tapering_mask(p, m), m, None
    if kind == "support":
        S = io.support_from_json(io.load_json_file(arg))
        if S.p != p:
            raise BadParamsError(f"support file has p={S.p}, expected {p}")
        return support_mask(S), None, S
    if kind == "weights":
        M = io.mask_from_json(io.load_json_file(arg))
        if M.p != p:
            raise BadParamsError(f"weights file has p={M.p}, expected {p}")
        return M, None, None
    raise BadParamsError(f"unknown mask spec: {spec_text!r}")


def _cmd_gen_cov(args):
    if args.model != "file" and (args.p is None or args.p < 1):
        raise BadParamsError(f"--model {args.model} requires a positive --p")
    if args.model == "file":
        if not args.path:
            raise BadParamsError("--model file requires --path")
        T = io.toeplitz_from_json(io.load_json_file(args.path))
    elif args.model == "sparse":
        if args.taps:
            taps = np.asarray([float(v) for v in args.taps.split(",")])
        elif args.q is not None:
            taps = bounds.geometric_taps(args.q, args.rho if args.rho is not None else 0.5)
        else:
            raise BadParamsError("--model sparse requires --taps or --q")
        T = bounds.ma_cov(args.p, taps)
    elif args.model in ("geometric", "polynomial"):
        if args.L0 is not None:
            sp = SmoothnessParams(beta=args.beta, L0=args.L0, L=args.L)
            T = bounds.smooth_class_cov(args.p, sp, args.model, rho=args.rho)
        elif args.model == "geometric":
            if args.rho is None:
                raise BadParamsError("--model geometric requires --rho")
            T = bounds.geometric_cov(args.p, args.rho, args.scale)
        else:
            T = bounds.polynomial_cov(args.p, args.beta, args.scale)
    else:
        raise BadParamsError(f"unknown model {args.model!r}")
    io.dump_json(io.toeplitz_to_json(T), sys.stdout)
    return 0


def _load_covariance_arg(cov_arg, p):
    if cov_arg == "identity":
        if p is None:
            raise BadParamsError("--cov identity requires --p")
        return io.build_covariance({"model": "identity"}, p)
    return io.toeplitz_from_json(io.load_json_file(cov_arg))


def _cmd_sample(args):
    T = _load_covariance_arg(args.cov, args.p)
    spec = SamplerSpec(args.family, T, seed=args.seed, c=args.c)
    X = sample(spec, args.n)
    io.save_samples(X, args.out)
    return 0


def _cmd_estimate(args):
    X = io.load_samples(args.samples)
    M, _, _ = _parse_mask(args.mask, X.p)
    T = masked_toeplitz_estimate(X, M, center=args.center)
    io.dump_json(io.toeplitz_to_json(T), sys.stdout)
    return 0


def _cmd_psd_project(args):
    T = io.toeplitz_from_json(io.load_json_file(args.input))
    io.dump_json(io.toeplitz_to_json(psd_project(T)), sys.stdout)
    return 0


def _cmd_bound(args):
    M, m, S = _parse_mask(args.mask, args.p)
    sp = None
    if args.L0 is not None or args.beta is not None or args.L is not None:
        sp = SmoothnessParams(beta=args.beta if args.beta is not None else 1.0,
                              L0=args.L0 if args.L0 is not None else 1.0,
                              L=args.L if args.L is not None else 1.0)
    bv = evaluate_bounds(M, args.n, args.p, args.k2, t=args.t, m=m, support=S, sp=sp)
    out = dict(bv.inputs)
    out["variance_bound_mean"] = bv.mean_term
    if bv.prob_term is not None:
        out["variance_bound_prob"] = bv.prob_term
    io.dump_json(out, sys.stdout)
    return 0


def _cmd_sweep(args):
    cfg = SweepConfig.from_json(io.load_json_file(args.config))
    out_path = args.out or cfg.output
    if not out_path:
        raise BadParamsError("no output path (set \"output\" in the config or pass --out)")
    records, failures = run_sweep(cfg)
    io.write_sweep_csv(records, out_path)
    for tag, message in failures:
        print(f"cell failed: {tag}: {message}", file=sys.stderr)
    return 1 if failures else 0


def _cmd_plot(args):
    from .plotting import plot_sweep
    records = io.read_sweep_csv(args.csv)
    plot_sweep(records, args.x, args.y, args.out, overlay_bound=args.overlay_bound)
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="toepcov",
        description="Masked Toeplitz covariance estimation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("gen-cov", help="emit a Toeplitz covariance as JSON")
    q.add_argument("--model", required=True,
                   choices=["geometric", "polynomial", "sparse", "file"])
    q.add_argument("--p", type=int, default=None)
    q.add_argument("--rho", type=float, default=None)
    q.add_argument("--beta", type=float, default=1.0)
    q.add_argument("--scale", type=float, default=1.0)
    q.add_argument("--L0", type=float, default=None,
                   help="normalize so the density sup-norm is within L0")
    q.add_argument("--L", type=float, default=1.0)
    q.add_argument("--taps", type=str, default=None,
                   help="comma-separated moving-average taps (sparse model)")
    q.add_argument("--q", type=int, default=None,
                   help="geometric taps up to lag q (sparse model)")
    q.add_argument("--path", type=str, default=None, help="input for --model file")
    q.set_defaults(func=_cmd_gen_cov)

    q = sub.add_parser("sample", help="draw observations into a sample file")
    q.add_argument("--cov", required=True, help="covariance JSON file or 'identity'")
    q.add_argument("--p", type=int, default=None, help="dimension for --cov identity")
    q.add_argument("--family", required=True,
                   choices=["gaussian", "rademacher_linear", "sphere"])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--seed", type=int, required=True)
    q.add_argument("--out", required=True, help=".csv for text, else binary")
    q.add_argument("--c", type=float, default=1.0,
                   help="rademacher_linear concentration constant")
    q.set_defaults(func=_cmd_sample)

    q = sub.add_parser("estimate", help="masked diagonal-averaged estimate as JSON")
    q.add_argument("--samples", required=True)
    q.add_argument("--mask", required=True,
                   help="band:M | taper:M | support:FILE | weights:FILE | ones")
    q.add_argument("--center", action="store_true")
    q.set_defaults(func=_cmd_estimate)

    q = sub.add_parser("psd-project", help="positive semidefinite projection")
    q.add_argument("--in", dest="input", required=True, help="Toeplitz JSON file")
    q.set_defaults(func=_cmd_psd_project)

    q = sub.add_parser("bound", help="evaluate error-bound shapes as JSON")
    q.add_argument("--mask", required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--t", type=float, default=None)
    q.add_argument("--k2", type=float, default=1.0)
    q.add_argument("--beta", type=float, default=None)
    q.add_argument("--L", type=float, default=None)
    q.add_argument("--L0", type=float, default=None)
    q.set_defaults(func=_cmd_bound)

    q = sub.add_parser("sweep", help="run a Monte Carlo sweep to CSV")
    q.add_argument("--config", required=True)
    q.add_argument("--out", default=None, help="override the config output path")
    q.set_defaults(func=_cmd_sweep)

    q = sub.add_parser("plot", help="log-log SVG chart from a sweep CSV")
    q.add_argument("--csv", required=True)
    q.add_argument("--x", required=True, choices=["n", "p", "m"])
    q.add_argument("--y", required=True,
                   choices=["mean_error", "mean_error_psd", "bound_mean"])
    q.add_argument("--out", required=True)
    q.add_argument("--overlay-bound", action="store_true")
    q.set_defaults(func=_cmd_plot)

    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse printed its own message
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except KeyError as exc:
        print(f"error: missing field {exc}", file=sys.stderr)
        return 1
    except (ToepcovError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
