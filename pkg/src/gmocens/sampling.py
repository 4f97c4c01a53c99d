"""Observed censored samples and the five event indicators.

Row k-1 of ``ObservedSample.delta`` holds the indicator of event type k:

====  ==========================================
k     event
====  ==========================================
1     X1 is the smallest shock (T < C)
2     X2 is the smallest shock (C < T)
3     X3 is the smallest shock (T = C)
4     T <= C, the lifetime is observed
5     T >= C, the censoring time is observed
====  ==========================================
"""
from dataclasses import dataclass

import numpy as np

from .exceptions import DataError

__all__ = [
    "ObservedSample",
    "draw_sample",
    "from_bivariate",
    "from_status_coded",
    "from_indicators",
]


@dataclass(frozen=True, eq=False)
class ObservedSample:
    """Sorted observations Y(1) <= ... <= Y(n) with aligned indicators.

    Attributes
    ----------
    y : ndarray, shape (n,)
        Order statistics of Y = min(T, C).
    delta : ndarray of int8, shape (5, n)
        Event indicators permuted with ``y``.
    order : ndarray of int
        Stable sorting permutation, ``y == y_raw[order]``.
    t_raw, c_raw : ndarray or None
        The fully observed pairs in input order, when available.
    """

    y: np.ndarray
    delta: np.ndarray
    order: np.ndarray
    t_raw: np.ndarray = None
    c_raw: np.ndarray = None

    @property
    def n(self):
        return self.y.size

    def indicator(self, k):
        if k not in (1, 2, 3, 4, 5):
            raise ValueError("event type must be in 1..5")
        return self.delta[k - 1]

    def __len__(self):
        return self.y.size


def _build(y, d1, d2, d3, d4, d5, t_raw=None, c_raw=None):
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.size == 0:
        raise DataError("a sample needs at least one observation")
    if not np.all(np.isfinite(y)):
        raise DataError("observed times must be finite")
    if np.any(y < 0):
        raise DataError("observed times must be nonnegative")
    order = np.argsort(y, kind="stable")
    delta = np.stack([d1, d2, d3, d4, d5]).astype(np.int8)[:, order]
    y = y[order]
    y.setflags(write=False)
    delta.setflags(write=False)
    return ObservedSample(y, delta, order, t_raw, c_raw)


def draw_sample(m, n, rng):
    """Simulate n observations (Y, delta) from a GMO model."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    x1 = m.x1.sample(rng, n)
    x2 = m.x2.sample(rng, n)
    x3 = m.x3.sample(rng, n)
    t = np.minimum(x1, x3)
    c = np.minimum(x2, x3)
    y = np.minimum(t, c)
    d1 = (x1 <= x2) & (x1 <= x3)
    d2 = (x2 <= x1) & (x2 <= x3)
    d3 = (x3 <= x1) & (x3 <= x2)
    return _build(y, d1, d2, d3, t <= c, t >= c, t_raw=t, c_raw=c)


def _pairs(t, c):
    t = np.asarray(t, dtype=float)
    c = np.asarray(c, dtype=float)
    if t.shape != c.shape or t.ndim != 1:
        raise DataError("t and c must be one-dimensional and of equal length")
    if np.any(~np.isfinite(t)) or np.any(~np.isfinite(c)):
        raise DataError("times must be finite")
    if np.any(t < 0) or np.any(c < 0):
        raise DataError("times must be nonnegative")
    return t, c


def from_bivariate(t, c):
    """Sample from fully observed (T, C) pairs; the pairs are kept."""
    t, c = _pairs(t, c)
    d4 = t <= c
    d5 = t >= c
    d3 = d4 & d5
    return _build(np.minimum(t, c), d4 & ~d3, d5 & ~d3, d3, d4, d5, t_raw=t, c_raw=c)


def from_indicators(y, d4, d5):
    """Sample from observed times and the two censoring indicators."""
    d4 = np.asarray(d4).astype(bool)
    d5 = np.asarray(d5).astype(bool)
    y = np.asarray(y, dtype=float)
    if not (d4.shape == d5.shape == y.shape):
        raise DataError("y, d4 and d5 must have the same length")
    if np.any(~(d4 | d5)):
        raise DataError("every observation needs d4 or d5 set")
    d3 = d4 & d5
    return _build(y, d4 & ~d3, d5 & ~d3, d3, d4, d5)


_STATUS = {0: (True, True), 1: (True, False), 2: (False, True)}


def from_status_coded(times, status):
    """Competing-risk coding: 1 = event of interest, 2 = censoring event.

    Code 0 (still at risk at the end of follow-up) is recorded as a
    simultaneous event, i.e. both d4 and d5 are set. That is unusual, but
    it is how the T = C category is fed for data of this kind.
    """
    status = np.asarray(status)
    times = np.asarray(times, dtype=float)
    if status.shape != times.shape:
        raise DataError("times and status must have the same length")
    bad = ~np.isin(status, list(_STATUS))
    if bad.any():
        raise DataError(f"unknown status code(s): {sorted(set(status[bad].tolist()))}")
    d4 = np.isin(status, (0, 1))
    d5 = np.isin(status, (0, 2))
    return from_indicators(times, d4, d5)
