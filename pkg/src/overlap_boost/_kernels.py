"""Hot inner loops shared by threshold search, rule discovery, and containment checks.

Every kernel has a pure-numpy implementation and, when numba is importable, an
``@njit`` twin compiled on first use.  The public names bind to the numba
versions unless the environment variable ``OVERLAP_BOOST_DISABLE_NUMBA`` is set
to ``1`` (or numba is missing).  Both paths are kept arithmetic-identical so
artifacts do not depend on which one ran; ``benchmarks/bench_kernels.py``
compares their throughput.

Conventions: scores/values arrive sorted ascending, ``is_top`` is uint8
(1 = case labeled with the scorer's top class).  A "cut" k places the decision
threshold between sorted positions k-1 and k, so positions >= k are classified
top; cut 0 classifies everything top and cut n everything bottom.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLE = os.environ.get("OVERLAP_BOOST_DISABLE_NUMBA", "") == "1"

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# pure-numpy reference implementations


def cut_error_counts_np(is_top: np.ndarray) -> np.ndarray:
    """Misclassification count for every cut position 0..n.

    errors(k) = top cases below the cut + bottom cases at or above it.
    """
    n = is_top.shape[0]
    top_prefix = np.concatenate(([0], np.cumsum(is_top, dtype=np.int64)))
    top_total = top_prefix[n]
    cuts = np.arange(n + 1, dtype=np.int64)
    bottom_suffix = (n - cuts) - (top_total - top_prefix)
    return top_prefix + bottom_suffix


def cut_correct_weight_np(is_top: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Summed weight of correctly classified cases for every cut position."""
    wt = np.where(is_top == 1, weights, 0.0)
    wb = np.where(is_top == 1, 0.0, weights)
    ct = np.concatenate(([0.0], np.cumsum(wt)))
    cb = np.concatenate(([0.0], np.cumsum(wb)))
    return cb + (ct[-1] - ct)


def run_bounds_np(codes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Start/end (inclusive) indices of maximal runs of equal values in codes."""
    n = codes.shape[0]
    if n == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    change = np.flatnonzero(codes[1:] != codes[:-1]) + 1
    starts = np.concatenate(([0], change)).astype(np.int64)
    ends = np.concatenate((change, [n])).astype(np.int64) - 1
    return starts, ends


def box_contains_np(X: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Componentwise closed-range membership of each row of X."""
    return np.logical_and(X >= lo, X <= hi).all(axis=1)


# ---------------------------------------------------------------------------
# numba twins

if _HAVE_NUMBA:

    @njit(cache=True)
    def _cut_error_counts_nb(is_top):  # pragma: no cover - exercised via tests
        n = is_top.shape[0]
        out = np.empty(n + 1, dtype=np.int64)
        top_total = 0
        for i in range(n):
            top_total += is_top[i]
        # cut 0: everything classified top -> errors are the bottom cases
        errors = n - top_total
        out[0] = errors
        for k in range(1, n + 1):
            if is_top[k - 1] == 1:
                errors += 1
            else:
                errors -= 1
            out[k] = errors
        return out

    @njit(cache=True)
    def _cut_correct_weight_nb(is_top, weights):  # pragma: no cover
        n = is_top.shape[0]
        out = np.empty(n + 1, dtype=np.float64)
        correct = 0.0
        for i in range(n):
            if is_top[i] == 1:
                correct += weights[i]
        out[0] = correct
        for k in range(1, n + 1):
            if is_top[k - 1] == 1:
                correct -= weights[k - 1]
            else:
                correct += weights[k - 1]
            out[k] = correct
        return out

    @njit(cache=True)
    def _run_bounds_nb(codes):  # pragma: no cover
        n = codes.shape[0]
        if n == 0:
            return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
        m = 1
        for i in range(1, n):
            if codes[i] != codes[i - 1]:
                m += 1
        starts = np.empty(m, dtype=np.int64)
        ends = np.empty(m, dtype=np.int64)
        starts[0] = 0
        r = 0
        for i in range(1, n):
            if codes[i] != codes[i - 1]:
                ends[r] = i - 1
                r += 1
                starts[r] = i
        ends[r] = n - 1
        return starts, ends

    @njit(cache=True)
    def _box_contains_nb(X, lo, hi):  # pragma: no cover
        n, d = X.shape
        out = np.empty(n, dtype=np.bool_)
        for i in range(n):
            inside = True
            for j in range(d):
                v = X[i, j]
                if v < lo[j] or v > hi[j]:
                    inside = False
                    break
            out[i] = inside
        return out

    def cut_error_counts_nb(is_top: np.ndarray) -> np.ndarray:
        return _cut_error_counts_nb(np.ascontiguousarray(is_top, dtype=np.uint8))

    def cut_correct_weight_nb(is_top: np.ndarray, weights: np.ndarray) -> np.ndarray:
        return _cut_correct_weight_nb(
            np.ascontiguousarray(is_top, dtype=np.uint8),
            np.ascontiguousarray(weights, dtype=np.float64),
        )

    def run_bounds_nb(codes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return _run_bounds_nb(np.ascontiguousarray(codes, dtype=np.int64))

    def box_contains_nb(X: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        return _box_contains_nb(
            np.ascontiguousarray(X, dtype=np.float64),
            np.ascontiguousarray(lo, dtype=np.float64),
            np.ascontiguousarray(hi, dtype=np.float64),
        )


USING_NUMBA = _HAVE_NUMBA and not _DISABLE

if USING_NUMBA:
    cut_error_counts = cut_error_counts_nb
    cut_correct_weight = cut_correct_weight_nb
    run_bounds = run_bounds_nb
    box_contains = box_contains_nb
else:
    cut_error_counts = cut_error_counts_np
    cut_correct_weight = cut_correct_weight_np
    run_bounds = run_bounds_np
    box_contains = box_contains_np
