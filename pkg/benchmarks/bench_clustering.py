"""Compare the numba and pure-numpy contiguous Ward kernels.

Usage: python benchmarks/bench_clustering.py [--frames 500 1000 2000] [--dim 26]
"""

import argparse
import time

import numpy as np

from soskit.saliency import build_segment_tree


def bench(T, C, backend, repeats=3, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(T, C))
    build_segment_tree(X[: min(T, 64)], backend=backend)  # warm up (jit compile)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        build_segment_tree(X, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--frames", type=int, nargs="+", default=[250, 500, 1000, 2000])
    ap.add_argument("--dim", type=int, default=26)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    print(f"{'T':>6} {'dim':>4} {'numpy (s)':>10} {'numba (s)':>10} {'speedup':>8}")
    for T in args.frames:
        t_np = bench(T, args.dim, "numpy", args.repeats)
        t_nb = bench(T, args.dim, "numba", args.repeats)
        print(f"{T:>6} {args.dim:>4} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
