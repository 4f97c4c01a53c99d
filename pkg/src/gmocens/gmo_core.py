"""Analytic side of the generalized Marshall-Olkin (GMO) shock model.

Three independent shocks X1, X2, X3 produce a lifetime T = min(X1, X3) and a
censoring time C = min(X2, X3). Everything here is computed from the shock
laws: marginals, the joint survival, the survival copula and its alpha
functions, Kendall's tau, and the extreme value limit of the copula.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .distributions import (
    Beta,
    Exponential,
    PointMassAtInfinity,
    ShockDistribution,
    parse_distribution,
)
from .exceptions import DomainError, NumericalError, UnsupportedCaseError

__all__ = [
    "QuadratureConfig",
    "GmoModel",
    "MoCopulaParams",
    "ExtremeLimitCopula",
    "ShockPairSampler",
    "model_a",
    "model_b",
    "parse_model",
    "joint_survival",
    "alpha",
    "survival_copula",
    "log_survival_copula",
    "kendall_tau_mo",
    "kendall_tau_integral",
    "prob_simultaneous",
    "mo_to_gmo_construction",
    "extreme_limit",
    "extreme_limit_error",
]

# event type k -> shocks whose occurrence produces it
EVENT_SHOCKS = {1: (1,), 2: (2,), 3: (3,), 4: (1, 3), 5: (2, 3)}


@dataclass(frozen=True)
class QuadratureConfig:
    """Settings for adaptive Gauss-Kronrod integration (QUADPACK ``qags``).

    ``tail`` fixes the upper limit t* through H(t*) = 1 - tail when the
    support is unbounded.
    """

    epsabs: float = 1e-12
    epsrel: float = 1e-10
    limit: int = 200
    tail: float = 1e-10


def _quad(fun, a, b, quad, points=None):
    val, err, info = integrate.quad(
        fun, a, b, epsabs=quad.epsabs, epsrel=quad.epsrel, limit=quad.limit,
        points=points, full_output=1,
    )[:3]
    if not math.isfinite(val) or err > max(quad.epsabs, quad.epsrel * abs(val)) * 1e3:
        raise NumericalError(
            f"quadrature on [{a}, {b}] did not converge (error estimate {err:.3g})",
            achieved=err,
        )
    return val


def _invert_increasing(fun, target, terminal, xtol=1e-13, max_iter=400):
    """Vectorized inf{t >= 0 : fun(t) >= target} for nondecreasing ``fun``."""
    target = np.asarray(target, dtype=float)
    shape = target.shape
    target = target.ravel()
    endless = np.isposinf(target)
    target = np.where(endless, 0.0, target)
    lo = np.zeros_like(target)
    if math.isfinite(terminal):
        hi = np.full_like(target, terminal)
    else:
        hi = np.ones_like(target)
        grow = fun(hi) < target
        while grow.any():
            hi[grow] *= 2.0
            if np.any(hi > 1e300):
                raise NumericalError("could not bracket the generalized inverse")
            grow = fun(hi) < target
    hi[target <= 0] = 0.0
    for _ in range(max_iter):
        open_ = (hi - lo) > xtol * np.maximum(1.0, hi)
        if not open_.any():
            break
        mid = 0.5 * (lo + hi)
        up = fun(mid) >= target
        hi = np.where(open_ & up, mid, hi)
        lo = np.where(open_ & ~up, mid, lo)
    hi[endless] = terminal
    return hi.reshape(shape)


@dataclass(frozen=True)
class GmoModel:
    """Three independent shocks with T = min(X1, X3) and C = min(X2, X3)."""

    x1: ShockDistribution
    x2: ShockDistribution
    x3: ShockDistribution
    name: str = field(default="custom", compare=False)

    def shock(self, j):
        return (self.x1, self.x2, self.x3)[j - 1]

    @property
    def terminal(self):
        return min(self.x1.terminal, self.x2.terminal, self.x3.terminal)

    @property
    def continuous(self):
        return self.x1.continuous and self.x2.continuous and self.x3.continuous

    # marginals -----------------------------------------------------------
    def cumhaz_T(self, t):
        return self.x1.cumhaz(t) + self.x3.cumhaz(t)

    def cumhaz_C(self, t):
        return self.x2.cumhaz(t) + self.x3.cumhaz(t)

    def marginal_survival_T(self, t):
        return self.x1.sf(t) * self.x3.sf(t)

    def marginal_survival_C(self, t):
        return self.x2.sf(t) * self.x3.sf(t)

    def survival_Y(self, t):
        """H-bar(t) = P(Y > t)."""
        return self.x1.sf(t) * self.x2.sf(t) * self.x3.sf(t)

    def cumhaz_Y(self, t):
        return self.x1.cumhaz(t) + self.x2.cumhaz(t) + self.x3.cumhaz(t)

    def event_hazard(self, k, t):
        """Hazard rate of the event type k (1..5) in the observed process."""
        return sum(self.shock(j).hazard(t) for j in EVENT_SHOCKS[k])

    def event_cumhaz(self, k, t):
        return sum(self.shock(j).cumhaz(t) for j in EVENT_SHOCKS[k])

    def inverse_survival_T(self, u):
        """Generalized inverse inf{t : F-bar_T(t) <= u}."""
        u = np.asarray(u, dtype=float)
        with np.errstate(divide="ignore"):
            return _invert_increasing(self.cumhaz_T, -np.log(u), self.terminal)

    def inverse_survival_C(self, v):
        v = np.asarray(v, dtype=float)
        with np.errstate(divide="ignore"):
            return _invert_increasing(self.cumhaz_C, -np.log(v), self.terminal)

    def quantile_Y(self, p):
        """Quantile of Y = min(T, C), i.e. H^-(p)."""
        p = np.asarray(p, dtype=float)
        with np.errstate(divide="ignore"):
            return _invert_increasing(self.cumhaz_Y, -np.log1p(-p), self.terminal)

    def joint_survival(self, t, s):
        return joint_survival(self, t, s)


def model_a():
    """Exponential shocks with rates 1, 2 and 3."""
    return GmoModel(Exponential(1.0), Exponential(2.0), Exponential(3.0), name="a")


def model_b():
    """Beta shocks B(2, 3), B(10, 10) and B(2.5, 6)."""
    return GmoModel(Beta(2.0, 3.0), Beta(10.0, 10.0), Beta(2.5, 6.0), name="b")


def parse_model(text):
    """``"a"``, ``"b"`` or three comma separated shock specs, e.g. ``"exp:1,exp:2,exp:3"``."""
    key = text.strip().lower()
    if key == "a":
        return model_a()
    if key == "b":
        return model_b()
    parts = [p for p in key.split(",") if p.strip()]
    if len(parts) != 3:
        raise ValueError(f"a custom model needs three shock specs, got {text!r}")
    return GmoModel(*(parse_distribution(p) for p in parts), name=key)


def joint_survival(m, t, s):
    """P(T > t, C > s) = F1(t) F2(s) F3(max(t, s)) in survival terms."""
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    out = m.x1.sf(t) * m.x2.sf(s) * m.x3.sf(np.maximum(t, s))
    return float(out) if np.ndim(out) == 0 else out


def alpha(m, which, t):
    """alpha_i(t) = Lambda_3(t) / (Lambda_i(t) + Lambda_3(t)) for i in {1, 2}."""
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    li = m.shock(which).cumhaz(t)
    l3 = m.x3.cumhaz(t)
    den = np.asarray(li + l3, dtype=float)
    if np.any(den <= 0):
        raise DomainError("alpha is undefined where both cumulative hazards vanish")
    if np.any(~np.isfinite(den)):
        raise DomainError("alpha is undefined beyond the end of the support")
    return _as_scalar(l3 / den)


def _as_scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def _safe_alpha(m, which, t):
    li = m.shock(which).cumhaz(t)
    l3 = m.x3.cumhaz(t)
    den = li + l3
    ok = (den > 0) & np.isfinite(den)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(ok, l3 / np.where(ok, den, 1.0), 0.0)


def log_survival_copula(m, logu, logv):
    """log C-tilde evaluated from log u and log v.

    Working on the log scale keeps u**n style arguments usable when they
    would underflow in double precision.
    """
    logu = np.asarray(logu, dtype=float)
    logv = np.asarray(logv, dtype=float)
    if np.any(logu > 0) or np.any(logv > 0):
        raise DomainError("copula arguments must lie in [0, 1]")
    # a zero argument gives a zero copula; keep the inversion finite there
    t = _invert_increasing(m.cumhaz_T, np.where(np.isneginf(logu), 0.0, -logu), m.terminal)
    s = _invert_increasing(m.cumhaz_C, np.where(np.isneginf(logv), 0.0, -logv), m.terminal)
    with np.errstate(invalid="ignore"):
        e1 = np.where(logu < 0, _safe_alpha(m, 1, t) * -logu, 0.0)
        e2 = np.where(logv < 0, _safe_alpha(m, 2, s) * -logv, 0.0)
        out = logu + logv + np.minimum(e1, e2)
    out = np.where(np.isneginf(logu) | np.isneginf(logv), -np.inf, out)
    return _as_scalar(out)


def survival_copula(m, u, v):
    """C-tilde(u, v) = u v min(u^-alpha1(F_T^-(u)), v^-alpha2(F_C^-(v)))."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if np.any(~((u >= 0) & (u <= 1))) or np.any(~((v >= 0) & (v <= 1))):
        raise DomainError("copula arguments must lie in [0, 1]")
    with np.errstate(divide="ignore"):
        return _as_scalar(np.exp(log_survival_copula(m, np.log(u), np.log(v))))


@dataclass(frozen=True)
class MoCopulaParams:
    """Marshall-Olkin copula parameters alpha1, alpha2 in [0, 1]."""

    alpha1: float
    alpha2: float

    def __post_init__(self):
        for a in (self.alpha1, self.alpha2):
            if not 0.0 <= a <= 1.0:
                raise DomainError("MO parameters must lie in [0, 1]")

    @classmethod
    def from_rates(cls, lam1, lam2, lam3):
        return cls(lam3 / (lam1 + lam3), lam3 / (lam2 + lam3))


def kendall_tau_mo(p):
    """Kendall's tau of the MO copula, a1 a2 / (a1 - a1 a2 + a2).

    Evaluated as 1 / (1/a1 + 1/a2 - 1), which is the same quantity but keeps
    round-off out of simple cases such as (0.75, 0.6). Either parameter at 0
    means independence and gives 0.
    """
    a1, a2 = p.alpha1, p.alpha2
    if a1 == 0.0 or a2 == 0.0:
        return 0.0
    return 1.0 / (1.0 / a1 + 1.0 / a2 - 1.0)


def _upper_limit(m, quad):
    if math.isfinite(m.terminal):
        return m.terminal
    return float(_invert_increasing(m.cumhaz_Y, -math.log(quad.tail), m.terminal))


def _tau_integrand(m):
    def f(u):
        # H-bar(u)^2 * lambda_3(u): the measure dH_3^1 is H-bar dLambda_3
        return (m.x1.sf(u) * m.x2.sf(u)) ** 2 * m.x3.sf(u) * m.x3.pdf(u)

    return f


def kendall_tau_integral(m, quad=None):
    """tau = 2 * integral of H-bar dH_3^1 by adaptive quadrature."""
    quad = quad or QuadratureConfig()
    if isinstance(m.x3, PointMassAtInfinity):
        return 0.0
    b = _upper_limit(m, quad)
    return 2.0 * _quad(_tau_integrand(m), 0.0, b, quad)


def prob_simultaneous(m, quad=None):
    """P(T = C) = H_3^1(infinity), the integral of F1 F2 against the law of X3."""
    quad = quad or QuadratureConfig()
    if isinstance(m.x3, PointMassAtInfinity):
        return 0.0
    b = _upper_limit(m, quad)
    return _quad(lambda u: m.x1.sf(u) * m.x2.sf(u) * m.x3.pdf(u), 0.0, b, quad)


@dataclass(frozen=True)
class ShockPairSampler:
    """Draws (T, C) with MO survival copula (alpha1, alpha2) and given marginals.

    Three exponentials E1, E2, E3 with rates 1/alpha1 - 1, 1/alpha2 - 1 and 1
    are combined as T = F_T^-(1 - exp(-min(E1, E3) / alpha1)) and likewise for C.
    """

    params: MoCopulaParams
    marg_t: ShockDistribution
    marg_c: ShockDistribution

    def sample(self, rng, n):
        a1, a2 = self.params.alpha1, self.params.alpha2
        e1 = _exp_or_inf(rng, 1.0 / a1 - 1.0, n)
        e2 = _exp_or_inf(rng, 1.0 / a2 - 1.0, n)
        e3 = rng.exponential(1.0, n)
        pt = -np.expm1(-np.minimum(e1, e3) / a1)
        pc = -np.expm1(-np.minimum(e2, e3) / a2)
        return self.marg_t.quantile(pt), self.marg_c.quantile(pc)


def _exp_or_inf(rng, rate, n):
    if rate <= 0:
        return np.full(n, np.inf)
    return rng.exponential(1.0 / rate, n)


def mo_to_gmo_construction(p, marg_t, marg_c):
    if p.alpha1 <= 0 or p.alpha2 <= 0:
        raise DomainError("the shock construction needs alpha1, alpha2 > 0")
    return ShockPairSampler(p, marg_t, marg_c)


@dataclass(frozen=True)
class ExtremeLimitCopula:
    """Extreme value copula min(v u^(1 - xi1), u v^(1 - xi2))."""

    xi1: float
    xi2: float

    def pickands(self, t):
        t = np.asarray(t, dtype=float)
        return _as_scalar(1.0 - np.minimum(self.xi1 * (1.0 - t), self.xi2 * t))

    def __call__(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return _as_scalar(np.minimum(v * u ** (1.0 - self.xi1), u * v ** (1.0 - self.xi2)))

    def log(self, logu, logv):
        logu = np.asarray(logu, dtype=float)
        logv = np.asarray(logv, dtype=float)
        return np.minimum(logv + (1.0 - self.xi1) * logu, logu + (1.0 - self.xi2) * logv)


def extreme_limit(gammas):
    """Limit copula for shocks with extreme value indices (g1, g2, g3).

    All three indices must share a strict sign; the light tailed case with a
    zero index is not covered.
    """
    g1, g2, g3 = (float(g) for g in gammas)
    if all(g > 0 for g in (g1, g2, g3)) or all(g < 0 for g in (g1, g2, g3)):
        return ExtremeLimitCopula(g1 / (g1 + g3), g2 / (g2 + g3))
    raise UnsupportedCaseError("extreme value indices must be all positive or all negative")


def extreme_limit_error(m, limit, n, grid_points=20, orientation="tail"):
    """Sup distance between a power-transformed GMO copula and ``limit``.

    ``orientation="tail"`` uses C(u^n, v^n)^(1/n), which looks at the joint
    upper tail of (T, C). ``"origin"`` uses C(u^(1/n), v^(1/n))^n instead.
    """
    g = (np.arange(grid_points) + 0.5) / grid_points
    uu, vv = np.meshgrid(g, g, indexing="ij")
    lu, lv = np.log(uu), np.log(vv)
    if orientation == "tail":
        lc = log_survival_copula(m, n * lu, n * lv) / n
    elif orientation == "origin":
        lc = log_survival_copula(m, lu / n, lv / n) * n
    else:
        raise ValueError("orientation must be 'tail' or 'origin'")
    return float(np.max(np.abs(np.exp(lc) - limit(uu, vv))))
