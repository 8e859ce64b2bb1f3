# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-series hot loops; same contracts as ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


def spike_scores(const double[::1] v, Py_ssize_t k):
    cdef Py_ssize_t n = v.shape[0], i, j
    cdef double left, right, d
    cdef bint has_left, has_right
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    for i in range(n):
        has_left = False
        has_right = False
        left = 0.0
        right = 0.0
        for j in range(1, k + 1):
            if i - j >= 0:
                d = v[i] - v[i - j]
                if not has_left or d > left:
                    left = d
                    has_left = True
            if i + j < n:
                d = v[i] - v[i + j]
                if not has_right or d > right:
                    right = d
                    has_right = True
        o[i] = (left + right) / 2.0
    return out


def chord_argmax(const double[::1] v, Py_ssize_t x0, Py_ssize_t x1,
                 Py_ssize_t lo, Py_ssize_t hi, bint latest):
    cdef double y0 = v[x0], y1 = v[x1]
    cdef double dy = y1 - y0
    cdef double dx = <double>(x1 - x0)
    cdef double best = -1.0, d
    cdef Py_ssize_t t, arg = lo
    for t in range(lo, hi + 1):
        d = fabs(dy * <double>(t - x0) + dx * (y0 - v[t]))
        if d > best or (latest and d == best):
            best = d
            arg = t
    return arg


def beauty_sum(const double[::1] v, Py_ssize_t ws, Py_ssize_t we, Py_ssize_t le):
    cdef double y0 = v[ws]
    cdef double slope = (v[le] - y0) / <double>(le - ws)
    cdef double total = 0.0, s, line
    cdef Py_ssize_t t
    for t in range(ws, we + 1):
        s = v[t]
        line = slope * <double>(t - ws) + y0
        total += (line - s) / (s if s > 1.0 else 1.0)
    return total
