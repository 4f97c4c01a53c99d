# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled double sums behind the plug-in variance estimators.

Both routines are plain O(J^2) loops that never allocate a J x J matrix.
``_kernels_py`` holds numpy versions with the same signatures.
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()


def hazard_cross_sum(const double[::1] hbar_left, const double[::1] wk,
                     const double[::1] wl, Py_ssize_t jt, Py_ssize_t js):
    """sum_{a<jt} sum_{b<js} hbar[max(a,b)] / (hbar[a] hbar[b]) * wk[a] * wl[b]."""
    cdef Py_ssize_t a, b, m
    cdef double total = 0.0, row, ha
    for a in range(jt):
        if wk[a] == 0.0:
            continue
        ha = hbar_left[a]
        row = 0.0
        for b in range(js):
            if wl[b] == 0.0:
                continue
            m = a if a > b else b
            row += hbar_left[m] / (ha * hbar_left[b]) * wl[b]
        total += row * wk[a]
    return total


def tau_variance_sums(const double[::1] hb, const double[::1] h3, const double[::1] d3):
    """Return (S1, S2, S3) with

    S1 = sum_ij d3_i d3_j (min(hb_i, hb_j) - hb_i hb_j)
    S2 = sum_ij (min(h3_i, h3_j) - h3_i h3_j)
    S3 = sum_ij d3_i (max(0, h3_j - h3_i) - hb_i h3_j)
    """
    cdef Py_ssize_t n = hb.shape[0], i, j
    cdef double s1 = 0.0, s2 = 0.0, s3 = 0.0, r1, r2, r3, x, y
    for i in range(n):
        r1 = 0.0
        r2 = 0.0
        r3 = 0.0
        for j in range(n):
            if d3[i] != 0.0 and d3[j] != 0.0:
                x = hb[i] if hb[i] < hb[j] else hb[j]
                r1 += x - hb[i] * hb[j]
            y = h3[i] if h3[i] < h3[j] else h3[j]
            r2 += y - h3[i] * h3[j]
            if d3[i] != 0.0:
                x = h3[j] - h3[i]
                r3 += (x if x > 0.0 else 0.0) - hb[i] * h3[j]
        s1 += r1
        s2 += r2
        s3 += r3 * d3[i]
    return s1, s2, s3
