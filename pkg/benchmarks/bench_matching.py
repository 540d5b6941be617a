"""Benchmark the compiled matching kernel against the pure-Python fallback.

The subset DP is the hot loop of Monte-Carlo decoding sweeps, so it ships as
a Cython extension with a pure-Python mirror.  This script times both on the
same random complete-graph instances and checks they agree.

Usage:
    python benchmarks/bench_matching.py [--sizes 8,12,14,16] [--repeats 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from wplzx.masd import _dp

try:
    from wplzx.masd import _dpmatch
except ImportError:
    _dpmatch = None


def run_one(kernel, w, boundary, repeats: int) -> tuple[float, float]:
    best = float("inf")
    cost = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        cost, _choice = kernel.solve_dense(w, boundary)
        best = min(best, time.perf_counter() - t0)
    return cost, best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="8,10,12,14,16")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(args.seed)

    print(f"{'n':>4} {'pure (s)':>12} {'compiled (s)':>14} {'speedup':>9}")
    for n in sizes:
        w = rng.uniform(0.1, 10.0, size=(n, n))
        w = (w + w.T) / 2
        boundary = rng.uniform(0.1, 10.0, size=n)
        cost_pure, t_pure = run_one(_dp, w, boundary, args.repeats)
        if _dpmatch is None:
            print(f"{n:>4} {t_pure:>12.4f} {'(not built)':>14} {'-':>9}")
            continue
        cost_cy, t_cy = run_one(_dpmatch, w, boundary, args.repeats)
        assert abs(cost_pure - cost_cy) < 1e-9, "kernels disagree"
        print(f"{n:>4} {t_pure:>12.4f} {t_cy:>14.4f} {t_pure / t_cy:>8.1f}x")


if __name__ == "__main__":
    main()
