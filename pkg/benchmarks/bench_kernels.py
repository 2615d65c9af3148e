#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Times the power-iteration spectral norm (the harness hot loop) and the
diagonal-sum kernel on symmetric random matrices, and prints one table row
per size with the speedup. Run after `pip install -e .`:

    python benchmarks/bench_kernels.py [--sizes 64,256,512,1024] [--repeats 5]
"""

import argparse
import time

import numpy as np

from toepcov import _backend, _kernels_py

try:
    from toepcov import _kernels
except ImportError:
    _kernels = None


def bench_one(mod, a, v0, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        theta, iters, status = mod.power_norm(a, v0, 1e-10, 10 * a.shape[0] + 1000)
        best = min(best, time.perf_counter() - t0)
    return best, theta, iters


def bench_diag(mod, a, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        mod.diag_sums(a)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="64,256,512,1024")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if _kernels is None:
        print("compiled kernels not built; showing the python backend only")
    rng = np.random.default_rng(0)
    print(f"{'p':>6} {'kernel':<12} {'python':>12} {'compiled':>12} {'speedup':>8}")
    for p in sizes:
        a = rng.standard_normal((p, p))
        a = np.ascontiguousarray((a + a.T) / 2)
        v0 = _backend.start_vector(p)
        t_py, theta_py, iters = bench_one(_kernels_py, a, v0, args.repeats)
        if _kernels is not None:
            t_cy, theta_cy, _ = bench_one(_kernels, a, v0, args.repeats)
            assert abs(theta_cy - theta_py) <= 1e-8 * max(abs(theta_py), 1e-300)
            print(f"{p:>6} {'power_norm':<12} {t_py * 1e3:>10.2f}ms {t_cy * 1e3:>10.2f}ms "
                  f"{t_py / t_cy:>7.1f}x   ({iters} iters)")
        else:
            print(f"{p:>6} {'power_norm':<12} {t_py * 1e3:>10.2f}ms {'-':>12} {'-':>8}")
        d_py = bench_diag(_kernels_py, a, args.repeats)
        if _kernels is not None:
            d_cy = bench_diag(_kernels, a, args.repeats)
            print(f"{p:>6} {'diag_sums':<12} {d_py * 1e3:>10.3f}ms {d_cy * 1e3:>10.3f}ms "
                  f"{d_py / d_cy:>7.1f}x")
        else:
            print(f"{p:>6} {'diag_sums':<12} {d_py * 1e3:>10.3f}ms {'-':>12} {'-':>8}")


if __name__ == "__main__":
    main()
