"""Univariate shock laws used to build GMO models.

Every family is an immutable value object exposing ``cdf``, ``sf`` (survival),
``pdf``, ``hazard``, ``cumhaz``, ``quantile`` and ``sample``. Evaluation
methods accept scalars or arrays of nonnegative finite times.
"""
import math
from dataclasses import dataclass

import numpy as np

from ._special import betainc, betaincc
from .exceptions import DomainError

__all__ = [
    "ShockDistribution",
    "Exponential",
    "Weibull",
    "Beta",
    "Pareto",
    "PointMassAtInfinity",
    "parse_distribution",
]


def _times(t):
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise DomainError("times must be finite")
    if np.any(t < 0):
        raise DomainError("times must be nonnegative")
    return t


def _probs(p):
    p = np.asarray(p, dtype=float)
    if np.any(~np.isfinite(p)) or np.any((p < 0) | (p > 1)):
        raise DomainError("probabilities must lie in [0, 1]")
    return p


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


class ShockDistribution:
    """Base class for nonnegative lifetime laws."""

    #: right end of the support
    terminal = math.inf
    continuous = True

    def cdf(self, t):
        return _out(1.0 - self._sf(_times(t)))

    def sf(self, t):
        return _out(self._sf(_times(t)))

    def pdf(self, t):
        return _out(self._pdf(_times(t)))

    def hazard(self, t):
        """Hazard rate f(t) / S(t); +inf where the survival is zero."""
        t = _times(t)
        s = self._sf(t)
        f = self._pdf(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            h = np.where(s > 0, f / np.where(s > 0, s, 1.0), np.inf)
        return _out(h)

    def cumhaz(self, t):
        """Cumulative hazard -log S(t); +inf where the survival is zero."""
        return _out(self._cumhaz(_times(t)))

    def quantile(self, p):
        """Generalized inverse inf{t : F(t) >= p}."""
        return _out(self._quantile(_probs(p)))

    def sample(self, rng, n):
        """Draw ``n`` i.i.d. lifetimes using the generator ``rng``."""
        n = int(n)
        if n < 1:
            raise ValueError("n must be a positive integer")
        return self._sample(rng, n)

    def _cumhaz(self, t):
        s = self._sf(t)
        with np.errstate(divide="ignore"):
            return -np.log(s)


@dataclass(frozen=True)
class Exponential(ShockDistribution):
    rate: float

    def __post_init__(self):
        if not (self.rate > 0 and math.isfinite(self.rate)):
            raise ValueError("Exponential rate must be positive and finite")

    def _sf(self, t):
        return np.exp(-self.rate * t)

    def _pdf(self, t):
        return self.rate * np.exp(-self.rate * t)

    def _cumhaz(self, t):
        return self.rate * t

    def _quantile(self, p):
        with np.errstate(divide="ignore"):
            return -np.log1p(-p) / self.rate

    def _sample(self, rng, n):
        return rng.exponential(1.0 / self.rate, n)


@dataclass(frozen=True)
class Weibull(ShockDistribution):
    shape: float
    scale: float = 1.0

    def __post_init__(self):
        if not (self.shape > 0 and self.scale > 0):
            raise ValueError("Weibull shape and scale must be positive")

    def _sf(self, t):
        return np.exp(-((t / self.scale) ** self.shape))

    def _pdf(self, t):
        z = t / self.scale
        with np.errstate(divide="ignore", invalid="ignore"):
            f = self.shape / self.scale * z ** (self.shape - 1.0) * np.exp(-(z**self.shape))
        return np.where(np.isfinite(f), f, np.inf)

    def _cumhaz(self, t):
        return (t / self.scale) ** self.shape

    def _quantile(self, p):
        with np.errstate(divide="ignore"):
            return self.scale * (-np.log1p(-p)) ** (1.0 / self.shape)

    def _sample(self, rng, n):
        return self.scale * rng.weibull(self.shape, n)


@dataclass(frozen=True)
class Beta(ShockDistribution):
    """Beta(a, b) law on [0, 1]; CDF from the incomplete beta continued fraction."""

    a: float
    b: float
    terminal = 1.0

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError("Beta parameters must be positive")

    def _sf(self, t):
        return betaincc(self.a, self.b, np.minimum(t, 1.0))

    def cdf(self, t):
        return _out(betainc(self.a, self.b, np.minimum(_times(t), 1.0)))

    def _pdf(self, t):
        a, b = self.a, self.b
        lnorm = math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        inside = (t > 0) & (t < 1)
        tt = np.where(inside, t, 0.5)
        f = np.exp(lnorm + (a - 1.0) * np.log(tt) + (b - 1.0) * np.log1p(-tt))
        f = np.where(inside, f, 0.0)
        # densities that blow up at an endpoint
        if a < 1:
            f = np.where(t == 0, np.inf, f)
        elif a == 1:
            f = np.where(t == 0, math.exp(lnorm), f)
        if b < 1:
            f = np.where(t == 1, np.inf, f)
        elif b == 1:
            f = np.where(t == 1, math.exp(lnorm), f)
        return f

    def _quantile(self, p, xtol=1e-13):
        p = np.atleast_1d(p)
        lo = np.zeros_like(p)
        hi = np.ones_like(p)
        while np.max(hi - lo) > xtol:
            mid = 0.5 * (lo + hi)
            below = betainc(self.a, self.b, mid) < p
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
            if np.all(hi - lo <= xtol):
                break
        q = 0.5 * (lo + hi)
        q = np.where(p <= 0, 0.0, np.where(p >= 1, 1.0, q))
        return q

    def quantile(self, p):
        p = _probs(p)
        q = self._quantile(p)
        return float(q[0]) if np.ndim(p) == 0 else q.reshape(np.shape(p))

    def _sample(self, rng, n):
        return rng.beta(self.a, self.b, n)


@dataclass(frozen=True)
class Pareto(ShockDistribution):
    """Pareto type II (Lomax) law with S(t) = (1 + t/scale)^(-index).

    The extreme value index of this family is ``1 / index``.
    """

    index: float
    scale: float = 1.0

    def __post_init__(self):
        if not (self.index > 0 and self.scale > 0):
            raise ValueError("Pareto index and scale must be positive")

    @property
    def extreme_value_index(self):
        return 1.0 / self.index

    def _sf(self, t):
        return np.exp(-self._cumhaz(t))

    def _pdf(self, t):
        return self.index / self.scale * (1.0 + t / self.scale) ** (-self.index - 1.0)

    def _cumhaz(self, t):
        return self.index * np.log1p(t / self.scale)

    def _quantile(self, p):
        with np.errstate(divide="ignore"):
            return self.scale * np.expm1(-np.log1p(-p) / self.index)

    def _sample(self, rng, n):
        return self.scale * rng.pareto(self.index, n)


@dataclass(frozen=True)
class PointMassAtInfinity(ShockDistribution):
    """Degenerate shock that never occurs; switches a shock off."""

    continuous = False

    def _sf(self, t):
        return np.ones_like(t)

    def _pdf(self, t):
        return np.zeros_like(t)

    def _cumhaz(self, t):
        return np.zeros_like(t)

    def _quantile(self, p):
        return np.where(p > 0, np.inf, 0.0)

    def _sample(self, rng, n):
        return np.full(n, np.inf)


_FAMILIES = {
    "exp": (Exponential, 1),
    "exponential": (Exponential, 1),
    "weibull": (Weibull, 2),
    "beta": (Beta, 2),
    "pareto": (Pareto, 2),
    "lomax": (Pareto, 2),
    "inf": (PointMassAtInfinity, 0),
    "none": (PointMassAtInfinity, 0),
}


def parse_distribution(text):
    """Build a shock law from a compact string such as ``"beta:2:3"``.

    Recognized families: ``exp:rate``, ``weibull:shape:scale``, ``beta:a:b``,
    ``pareto:index:scale`` and ``inf``.
    """
    name, *params = text.strip().lower().split(":")
    if name not in _FAMILIES:
        raise ValueError(f"unknown shock family {name!r}")
    cls, arity = _FAMILIES[name]
    if len(params) != arity:
        raise ValueError(f"{name} takes {arity} parameter(s), got {len(params)}")
    return cls(*(float(v) for v in params))
