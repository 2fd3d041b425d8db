#!/usr/bin/env python3
"""Benchmark the numba and numpy kernel backends against each other.

Times each hot kernel at the reference geometry (128x128 images) plus the
full per-band line pipeline, and prints one row per kernel with the speedup
of numba over numpy. Run after `pip install -e .`:

    python3 benchmarks/bench_kernels.py [--side 128] [--repeats 200]
"""

import argparse
import time

import numpy as np

from palmid import kernels
from palmid.imgcore import gaussian_kernel
from palmid.palmline import LinePipelineParams, line_feature_band


def _time(fn, repeats: int) -> float:
    fn()  # warmup (jit compile / cache touch)
    best = float("inf")
    for _ in range(3):
        t0 = time.perf_counter()
        for _ in range(repeats):
            fn()
        best = min(best, (time.perf_counter() - t0) / repeats)
    return best


def build_cases(side: int):
    rng = np.random.default_rng(0)
    image = rng.random((side, side))
    mask = rng.random((side, side)) > 0.7
    g7 = gaussian_kernel(1.0, 7)
    params = LinePipelineParams()
    return [
        ("correlate2d 7x7", lambda: kernels.correlate2d(image, g7)),
        ("neighbor_counts", lambda: kernels.neighbor_counts(mask)),
        ("binary_dilate r=1", lambda: kernels.binary_dilate(mask, 1)),
        ("block_mean_square 4x4", lambda: kernels.block_mean_square(image, 4, 4)),
        ("haar2d", lambda: kernels.haar2d(image)),
        ("line pipeline (1 band)", lambda: line_feature_band(image, params)),
    ]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--side", type=int, default=128)
    parser.add_argument("--repeats", type=int, default=200)
    args = parser.parse_args()

    backends = ["numpy"]
    try:
        kernels.use_backend("numba")
        backends.append("numba")
    except ImportError:
        print("numba unavailable; timing numpy only")

    cases = build_cases(args.side)
    timings = {}
    for backend in backends:
        kernels.use_backend(backend)
        for name, fn in cases:
            timings[(backend, name)] = _time(fn, args.repeats)

    print(f"side={args.side}  repeats={args.repeats}  (best of 3 rounds, per call)")
    header = f"{'kernel':<26} {'numpy':>12} {'numba':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, _ in cases:
        t_np = timings[("numpy", name)]
        if ("numba", name) in timings:
            t_nb = timings[("numba", name)]
            print(f"{name:<26} {t_np * 1e6:>10.1f}us {t_nb * 1e6:>10.1f}us "
                  f"{t_np / t_nb:>8.2f}x")
        else:
            print(f"{name:<26} {t_np * 1e6:>10.1f}us {'-':>12} {'-':>9}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
