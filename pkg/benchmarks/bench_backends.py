#!/usr/bin/env python3
"""Benchmark the numba-compiled kernels against the pure-numpy fallback.

Times the two hot kernels (wraparound distance matrix, per-drop hardening
SQINR) on Monte Carlo-shaped workloads, then the end-to-end drop pipeline
under each backend.  Select the package-wide backend at runtime with
FDMIMO_BACKEND=numpy|numba; this script imports both implementations
directly so a single run compares them.

Usage: python3 benchmarks/bench_backends.py [--drops N]
"""

import argparse
import time

import numpy as np

from fdmimo.kernels import _numpy

try:
    from fdmimo.kernels import _numba
except ImportError:
    _numba = None


def time_fn(fn, *args, repeat=5):
    fn(*args)  # warmup / JIT
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(drops):
    rng = np.random.default_rng(0)
    pts = rng.uniform(-1500, 1500, size=(380, 2))
    centers = rng.uniform(-1500, 1500, size=(19, 2))
    shifts = np.vstack([np.zeros((1, 2)), rng.uniform(-3000, 3000, size=(6, 2))])
    a_all = 10.0 ** rng.uniform(-2, 3, size=(19, 10))
    pilots = np.array([7, 8, 9, 10, 11, 12], dtype=np.int64)
    sq_args = (a_all, pilots, 100.0, 10.0, 0.96546, 0.96546, 10.0)

    rows = []
    for name, mod in (("numpy", _numpy), ("numba", _numba)):
        if mod is None:
            rows.append((name, None, None))
            continue
        t_dist = time_fn(mod.min_image_sq_dists, pts, centers, shifts, repeat=20)
        t_sq = time_fn(mod.hardening_sqinr_users, *sq_args, repeat=50)
        rows.append((name, t_dist, t_sq))
    print(f"{'backend':<8} {'min_image_sq_dists':>20} {'hardening_sqinr':>18}")
    for name, t_dist, t_sq in rows:
        if t_dist is None:
            print(f"{name:<8} {'unavailable':>20}")
            continue
        print(f"{name:<8} {t_dist * 1e6:>17.1f} us {t_sq * 1e6:>15.1f} us")
    return rows


def bench_pipeline(drops):
    import os
    import subprocess
    import sys

    print(f"\nend-to-end: collect_budgets({drops} drops), one process per backend",
          flush=True)
    for backend in ("numpy", "numba"):
        code = (
            "import time, fdmimo\n"
            "from fdmimo.montecarlo import collect_budgets\n"
            "from fdmimo.kernels import BACKEND\n"
            "p = fdmimo.SystemParams()\n"
            "collect_budgets(p, 10, 0)\n"  # warmup
            f"t0 = time.perf_counter(); collect_budgets(p, {drops}, 0)\n"
            "dt = time.perf_counter() - t0\n"
            f"print(f'{{BACKEND:<8}} {{dt:6.2f}} s  ({{dt / {drops} * 1e3:.2f}} ms/drop)')\n"
        )
        subprocess.run(
            [sys.executable, "-c", code],
            env={**os.environ, "FDMIMO_BACKEND": backend},
            check=True,
        )


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--drops", type=int, default=500)
    args = parser.parse_args()
    bench_kernels(args.drops)
    bench_pipeline(args.drops)


if __name__ == "__main__":
    main()
