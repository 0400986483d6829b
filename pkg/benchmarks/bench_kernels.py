"""Benchmark the hot kernels: numba @njit loops vs the pure-numpy fallback.

Usage: python benchmarks/bench_kernels.py [--size 320] [--frames 60] [--repeat 3]
"""

import argparse
import time

import numpy as np

from callisense.kernels import (
    _build_numba,
    stamp_discs_numpy,
    warp_bilinear_numpy,
)


def bench(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--size", type=int, default=320)
    parser.add_argument("--frames", type=int, default=60)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    size = args.size
    frame = rng.integers(0, 256, size=(size, size), dtype=np.uint8)
    h = np.array([[1.02, 0.01, -3.0], [-0.015, 0.98, 2.0], [1e-5, -2e-5, 1.0]])
    hinv = np.ascontiguousarray(np.linalg.inv(h))
    cx = rng.uniform(10, size - 10, size=800)
    cy = rng.uniform(10, size - 10, size=800)

    warp_jit, stamp_jit = _build_numba()
    warp_jit(frame, hinv, size, size)  # compile outside the timed region
    canvas = np.full((size, size), 255, dtype=np.uint8)
    stamp_jit(canvas, cx[:2], cy[:2], 6.0, np.uint8(0))

    def warp_numpy():
        for _ in range(args.frames):
            warp_bilinear_numpy(frame, hinv, size, size)

    def warp_numba():
        for _ in range(args.frames):
            warp_jit(frame, hinv, size, size)

    def stamp_numpy():
        c = np.full((size, size), 255, dtype=np.uint8)
        stamp_discs_numpy(c, cx, cy, 6.0, 0)

    def stamp_numba():
        c = np.full((size, size), 255, dtype=np.uint8)
        stamp_jit(c, cx, cy, 6.0, np.uint8(0))

    rows = [
        (f"warp {size}x{size} x{args.frames}", bench(warp_numpy, args.repeat), bench(warp_numba, args.repeat)),
        ("stamp 800 discs r=6", bench(stamp_numpy, args.repeat), bench(stamp_numba, args.repeat)),
    ]

    print(f"{'kernel':<28}{'numpy':>10}{'numba':>10}{'speedup':>9}")
    for name, t_np, t_nb in rows:
        print(f"{name:<28}{t_np * 1e3:>8.1f}ms{t_nb * 1e3:>8.1f}ms{t_np / t_nb:>8.1f}x")

    out_np = warp_bilinear_numpy(frame, hinv, size, size)
    out_nb = warp_jit(frame, hinv, size, size)
    print("outputs bit-identical:", bool(np.array_equal(out_np, out_nb)))


if __name__ == "__main__":
    main()
