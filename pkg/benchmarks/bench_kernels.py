#!/usr/bin/env python3
"""Benchmark the compiled texture-matrix kernels against the numpy fallback.

Runs the three kernels (co-occurrence pair counting, run-length counting,
box counting) plus the full fixed-resolution feature extractors on a seeded
512x512 texture and prints per-kernel timings and speedups.

Usage: python benchmarks/bench_kernels.py [--side 512] [--repeats 5]
"""

import argparse
import time

import numpy as np

from texbank.fixedres import fractal_dimension, glcm_features, quantize, rlm_features
from texbank.kernels import _numpy
from texbank.synth import fbm_surface

try:
    from texbank.kernels import _native
except ImportError:
    _native = None


def _best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_kernels(side, repeats):
    img = fbm_surface(side, 0.5, seed=0)
    q64 = quantize(img, 64)
    q16 = quantize(img, 16)
    vals = np.ascontiguousarray(img)

    cases = [
        ("glcm_counts (G=64, 4 offsets)",
         lambda impl: [impl.glcm_counts(q64.values, 64, dr, dc)
                       for dr, dc in [(0, 1), (-1, 1), (-1, 0), (-1, -1)]]),
        ("rlm_counts (G=16, 4 directions)",
         lambda impl: [impl.rlm_counts(q16.values, 16, d) for d in range(4)]),
        ("box_counts (s=2..side/4)",
         lambda impl: [impl.box_counts(vals, s, s * 255.0 / side)
                       for s in (2, 4, 8, 16, 32, 64, side // 4)]),
    ]

    print(f"kernel benchmark, {side}x{side} seeded texture, best of {repeats}\n")
    header = f"{'kernel':36s} {'numpy':>10s} {'native':>10s} {'speedup':>9s}"
    print(header)
    print("-" * len(header))
    for name, runner in cases:
        t_numpy = _best_of(lambda: runner(_numpy), repeats)
        if _native is not None:
            t_native = _best_of(lambda: runner(_native), repeats)
            print(f"{name:36s} {t_numpy * 1e3:8.2f}ms {t_native * 1e3:8.2f}ms "
                  f"{t_numpy / t_native:8.1f}x")
        else:
            print(f"{name:36s} {t_numpy * 1e3:8.2f}ms {'---':>10s} {'---':>9s}")

    print("\nend-to-end fixed-resolution extractors (selected backend):")
    for name, fn in [
        ("glcm_features", lambda: glcm_features(q64)),
        ("rlm_features", lambda: rlm_features(q16)),
        ("fractal_dimension", lambda: fractal_dimension(img)),
    ]:
        print(f"  {name:24s} {_best_of(fn, repeats) * 1e3:8.2f} ms")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--side", type=int, default=512)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    if _native is None:
        print("note: compiled kernels not built; numpy timings only\n")
    bench_kernels(args.side, args.repeats)


if __name__ == "__main__":
    main()
