"""Compare the numba kernels against their pure-numpy fallbacks.

Run:  python benchmarks/bench_kernels.py [--n 1000000] [--repeats 5]

The numba path is what the package binds by default; setting
OVERLAP_BOOST_DISABLE_NUMBA=1 switches every caller to the numpy path.  This
script times both directly, after a warm-up call so JIT compilation is not
measured.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from overlap_boost import _kernels


def _time(fn, *args, repeats: int) -> float:
    fn(*args)  # warm-up (and JIT compile)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--n", type=int, default=1_000_000)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if not _kernels._HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    rng = np.random.default_rng(0)
    n = args.n
    is_top = (rng.random(n) < 0.5).astype(np.uint8)
    weights = rng.uniform(1.0, 2.0, n)
    codes = rng.integers(0, 3, n).astype(np.int64)
    X = rng.random((n // 10, 8))
    lo = np.full(8, 0.2)
    hi = np.full(8, 0.8)

    cases = [
        ("cut_error_counts", _kernels.cut_error_counts_np, _kernels.cut_error_counts_nb, (is_top,)),
        (
            "cut_correct_weight",
            _kernels.cut_correct_weight_np,
            _kernels.cut_correct_weight_nb,
            (is_top, weights),
        ),
        ("run_bounds", _kernels.run_bounds_np, _kernels.run_bounds_nb, (codes,)),
        ("box_contains", _kernels.box_contains_np, _kernels.box_contains_nb, (X, lo, hi)),
    ]

    print(f"n = {n}, repeats = {args.repeats} (best shown)")
    print(f"{'kernel':<22}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, fn_np, fn_nb, fargs in cases:
        t_np = _time(fn_np, *fargs, repeats=args.repeats) * 1e3
        t_nb = _time(fn_nb, *fargs, repeats=args.repeats) * 1e3
        print(f"{name:<22}{t_np:>12.3f}{t_nb:>12.3f}{t_np / t_nb:>9.2f}x")


if __name__ == "__main__":
    main()
