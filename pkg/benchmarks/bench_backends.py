#!/usr/bin/env python3
"""Benchmark the numba kernels against the vectorized numpy fallback.

Imports both kernel modules directly (bypassing the ERCONSENSUS_BACKEND
selection) and times the four hot entry points on workloads shaped like the
package's reference experiments. Numba compilation happens in a warm-up pass
and is excluded from the timings.

Usage: python benchmarks/bench_backends.py [--quick]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from erconsensus import _kernels_numpy
from erconsensus.graphs import pair_count
from erconsensus.rng import RandomSource


def _timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def build_workloads(quick: bool):
    gen = RandomSource(0).generator()
    trials = 100 if quick else 250
    steps = 200 if quick else 500
    inner = 300 if quick else 1000
    mc = 1000 if quick else 4000
    theta = 2 * np.pi * np.arange(50) / 50
    z50 = np.column_stack([100 * np.cos(theta), 100 * np.sin(theta)])
    theta = 2 * np.pi * np.arange(10) / 10
    z10 = np.column_stack([100 * np.cos(theta), 100 * np.sin(theta)])
    return [
        ("trajectory n=50", "run_trajectory",
         (gen.random((steps, pair_count(50))), 50, 0.03, 0.02, z50, False)),
        (f"vdiff batch n=50 S={inner}", "batch_vdiff",
         (gen.random((inner, pair_count(50))), 50, 0.03, 0.04,
          z50 - z50.mean(axis=0))),
        (f"expm moments n=50 S={mc}", "batch_expm_moments",
         (gen.random((mc, pair_count(50))), 50, 0.03, 0.04)),
        (f"trials n=10 T={trials} K={steps}", "run_trials_v",
         (gen.random((trials, steps, pair_count(10))), 10, 0.01, 0.1, z10)),
    ]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    try:
        from erconsensus import _kernels_numba
    except ImportError:
        print("numba unavailable; nothing to compare")
        return

    workloads = build_workloads(args.quick)
    print(f"{'workload':34} {'numba':>10} {'numpy':>10} {'speedup':>8}")
    for label, fname, wargs in workloads:
        numba_fn = getattr(_kernels_numba, fname)
        numpy_fn = getattr(_kernels_numpy, fname)
        numba_fn(*wargs)  # warm-up: JIT compile outside the timed region
        t_nb = _timeit(lambda: numba_fn(*wargs), args.repeats)
        t_np = _timeit(lambda: numpy_fn(*wargs), args.repeats)
        print(f"{label:34} {t_nb * 1e3:9.1f}ms {t_np * 1e3:9.1f}ms {t_np / t_nb:7.2f}x")


if __name__ == "__main__":
    main()
