# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the loops in ``_kernels_py``; same signatures."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t

cnp.import_array()

cdef uint64_t LCG_MULTIPLIER = 6364136223846793005ULL
cdef uint64_t LCG_INCREMENT = 1442695040888963407ULL


def lcg_uniform(seed, Py_ssize_t n):
    if n <= 0:
        return np.zeros(0)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef uint64_t state = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t i
    cdef double scale = 2.0 / 9007199254740992.0
    for i in range(n):
        state = state * LCG_MULTIPLIER + LCG_INCREMENT
        out[i] = <double>(state >> 11) * scale - 1.0
    return out


def resonate(x, double b0, double a1, double a2):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] y = np.empty(n, dtype=np.float64)
    cdef double y0, y1 = 0.0, y2 = 0.0
    cdef Py_ssize_t i
    for i in range(n):
        y0 = b0 * xv[i] + a1 * y1 + a2 * y2
        y[i] = y0
        y2 = y1
        y1 = y0
    return y


def eac_enhance(curves):
    arr = np.asarray(curves, dtype=np.float64)
    shape = arr.shape
    width = shape[len(shape) - 1]  # no negative indexing under wraparound=False
    cdef cnp.ndarray[cnp.float64_t, ndim=2] c = np.ascontiguousarray(
        np.maximum(arr, 0.0).reshape(-1, width))
    cdef Py_ssize_t rows = c.shape[0], n = c.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((rows, n), dtype=np.float64)
    cdef Py_ssize_t r, i, h, h1
    cdef double s, v
    for r in range(rows):
        for i in range(n):
            h = i // 2
            if i % 2 == 0:
                s = c[r, h]
            else:
                h1 = h + 1
                if h1 > n - 1:
                    h1 = n - 1
                s = 0.5 * (c[r, h] + c[r, h1])
            v = c[r, i] - s
            out[r, i] = v if v > 0.0 else 0.0
    return out.reshape(shape)


def hysteresis(levels, double enter, double leave, Py_ssize_t min_gap):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] lv = np.ascontiguousarray(levels, dtype=np.float64)
    cdef Py_ssize_t n = lv.shape[0], i, start = 0, last_loud = 0, quiet = 0
    cdef bint active = False
    cdef double v
    spans = []
    for i in range(n):
        v = lv[i]
        if not active:
            if v > enter:
                active = True
                start = i
                last_loud = i
                quiet = 0
            continue
        if v < leave:
            quiet += 1
            if quiet >= min_gap:
                spans.append((start, last_loud + 1))
                active = False
        else:
            quiet = 0
            last_loud = i
    if active:
        spans.append((start, last_loud + 1))
    return spans


def median3(x):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = xv.copy()
    cdef double a, b, c
    for i in range(1, n - 1):
        a = xv[i - 1]
        b = xv[i]
        c = xv[i + 1]
        if a > b:
            a, b = b, a
        if b > c:
            b = c
        out[i] = a if a > b else b
    return out
