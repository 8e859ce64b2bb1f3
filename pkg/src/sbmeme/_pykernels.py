"""Pure-NumPy implementations of the per-series hot loops.

Used when the compiled ``_ckernels`` extension is not available, and as the
reference the compiled version is tested against.
"""
import numpy as np


def spike_scores(values, k):
    v = np.asarray(values, dtype=float)
    n = v.size
    left = np.full(n, -np.inf)
    right = np.full(n, -np.inf)
    for j in range(1, min(k, n - 1) + 1):
        d = v[j:] - v[:-j]
        np.maximum(left[j:], d, out=left[j:])
        np.maximum(right[:-j], -d, out=right[:-j])
    left[np.isneginf(left)] = 0.0
    right[np.isneginf(right)] = 0.0
    return (left + right) / 2.0


def chord_argmax(values, x0, x1, lo, hi, latest):
    v = np.asarray(values, dtype=float)
    y0 = v[x0]
    y1 = v[x1]
    t = np.arange(lo, hi + 1)
    dist = np.abs((y1 - y0) * (t - x0) + (x1 - x0) * (y0 - v[lo:hi + 1]))
    if latest:
        return int(hi - np.argmax(dist[::-1]))
    return int(lo + np.argmax(dist))


def beauty_sum(values, ws, we, le):
    v = np.asarray(values, dtype=float)
    y0 = v[ws]
    slope = (v[le] - y0) / (le - ws)
    seg = v[ws:we + 1]
    line = slope * (np.arange(ws, we + 1) - ws) + y0
    return float(np.sum((line - seg) / np.maximum(1.0, seg)))
