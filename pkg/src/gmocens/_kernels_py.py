"""Numpy versions of the compiled kernels, processed in row blocks."""
import numpy as np

_BLOCK = 1 << 21


def hazard_cross_sum(hbar_left, wk, wl, jt, js):
    hb = np.asarray(hbar_left, dtype=float)
    wk = np.asarray(wk, dtype=float)[:jt]
    wl = np.asarray(wl, dtype=float)[:js]
    cols = np.arange(js)
    colw = wl / hb[:js]
    step = max(1, _BLOCK // max(js, 1))
    total = 0.0
    for a0 in range(0, jt, step):
        rows = np.arange(a0, min(a0 + step, jt))
        m = np.maximum(rows[:, None], cols[None, :])
        inner = (hb[m] * colw[None, :]).sum(axis=1)
        total += float(np.sum(inner / hb[rows] * wk[rows]))
    return total


def tau_variance_sums(hb, h3, d3):
    hb = np.asarray(hb, dtype=float)
    h3 = np.asarray(h3, dtype=float)
    d3 = np.asarray(d3, dtype=float)
    n = hb.size
    step = max(1, _BLOCK // max(n, 1))
    s1 = s2 = s3 = 0.0
    for i0 in range(0, n, step):
        sl = slice(i0, i0 + step)
        hbi, h3i, d3i = hb[sl, None], h3[sl, None], d3[sl, None]
        s1 += float(np.sum(d3i * d3[None, :] * (np.minimum(hbi, hb) - hbi * hb)))
        s2 += float(np.sum(np.minimum(h3i, h3) - h3i * h3))
        s3 += float(np.sum(d3i * (np.maximum(0.0, h3 - h3i) - hbi * h3)))
    return s1, s2, s3
