#!/usr/bin/env python3
"""Benchmark the quadruple-enumeration kernels: compiled extension vs
the vectorized numpy fallback, on windowed group balls.

Usage: python benchmarks/bench_delta.py [--samples N]
"""

import argparse
import time

import numpy as np

from focalgroups.families import LamplighterFamily, NadicFamily
from focalgroups.metric import _defect2_exhaustive_numpy, _defect2_quadruples_numpy
from focalgroups.words import ball_points

try:
    from focalgroups import _speedups
except ImportError:
    _speedups = None


def timed(fn, *args, repeat=3):
    best, value = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return value, best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--samples", type=int, default=1_000_000)
    args = parser.parse_args()

    print(f"{'case':<42}{'n':>6}{'numpy':>12}{'compiled':>12}{'speedup':>10}")
    for family, radius in ((LamplighterFamily(2), 4), (NadicFamily(2), 4)):
        _, D = ball_points(family, radius)
        d = D.d

        # exhaustive kernel on the first 64 points (the exhaustive cutoff)
        sub = d[:64, :64].copy()
        v_np, t_np = timed(_defect2_exhaustive_numpy, sub)
        row = f"{family.name + ' exhaustive 64^4':<42}{64:>6}{t_np:>11.3f}s"
        if _speedups is not None:
            v_cy, t_cy = timed(_speedups.max_defect2_exhaustive, sub)
            assert v_cy == v_np, "kernel mismatch"
            row += f"{t_cy:>11.3f}s{t_np / t_cy:>9.1f}x"
        print(row)

        # sampled kernel on the full ball
        rng = np.random.default_rng(0)
        idx = rng.integers(0, len(D), size=(4, args.samples), dtype=np.int64)
        v_np, t_np = timed(_defect2_quadruples_numpy, d, idx[0], idx[1], idx[2], idx[3])
        row = f"{family.name + f' sampled {args.samples}':<42}{len(D):>6}{t_np:>11.3f}s"
        if _speedups is not None:
            parts = [np.ascontiguousarray(idx[i]) for i in range(4)]
            v_cy, t_cy = timed(_speedups.max_defect2_quadruples, d, *parts)
            assert max(0, int(v_cy)) == v_np, "kernel mismatch"
            row += f"{t_cy:>11.3f}s{t_np / t_cy:>9.1f}x"
        print(row)

    if _speedups is None:
        print("\ncompiled extension not available; numpy fallback timings only")


if __name__ == "__main__":
    main()
