"""Asymptotic covariances and confidence intervals.

Covariance entries sigma_{k,l}(t, s) describe the Gaussian limit of
sqrt(n) (Lambda_{k,n} - Lambda_k) jointly over event types and times. They
are available analytically for a known model (``sigma_analytic``) and as
plug-in estimates from data (``sigma_plugin``). The latter feed the
intervals for the joint survival estimate and for Kendall's tau.

Plug-in conventions: H-bar is replaced by its left limit r/n at each
distinct observed time (r the risk set), dLambda_k by d_k / r.
"""
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.stats import norm

from . import kernels
from .estimators import fit_joint_survival, kendall_tau_hat, tie_table
from .exceptions import DataError, DomainError, NumericalError
from .gmo_core import EVENT_SHOCKS, QuadratureConfig

__all__ = [
    "CovarianceQuery",
    "VarianceReport",
    "sigma_analytic",
    "sigma_plugin",
    "joint_survival_variance",
    "kendall_tau_variance",
    "BRANCH_TIE_RTOL",
]

BRANCH_TIE_RTOL = 1e-3


@dataclass(frozen=True)
class CovarianceQuery:
    k: int
    l: int
    t: float
    s: float

    def __post_init__(self):
        if self.k not in EVENT_SHOCKS or self.l not in EVENT_SHOCKS:
            raise ValueError("event types must be in 1..5")
        if not (self.t >= 0 and self.s >= 0):
            raise DomainError("times must be nonnegative")


@dataclass(frozen=True)
class VarianceReport:
    point_estimate: float
    variance: float
    ci_low: float
    ci_high: float
    level: float
    boundary_case: bool = False
    degenerate: bool = False

    def __post_init__(self):
        for name in ("point_estimate", "variance", "ci_low", "ci_high", "level"):
            object.__setattr__(self, name, float(getattr(self, name)))
        for name in ("boundary_case", "degenerate"):
            object.__setattr__(self, name, bool(getattr(self, name)))


# --------------------------------------------------------------------------
# analytic


def _quad(f, a, b, quad):
    if b <= a:
        return 0.0
    val, err = integrate.quad(f, a, b, epsabs=quad.epsabs, epsrel=quad.epsrel, limit=quad.limit)
    if not np.isfinite(val):
        raise NumericalError(f"covariance quadrature failed on [{a}, {b}]", achieved=err)
    return val


def _rate(m, shocks):
    return lambda u: sum(m.shock(j).hazard(u) for j in shocks)


def _joint_event_term(m, k, l, upper, quad):
    common = sorted(set(EVENT_SHOCKS[k]) & set(EVENT_SHOCKS[l]))
    if not common:
        return 0.0
    lam = _rate(m, common)
    return _quad(lambda u: lam(u) / m.survival_Y(u), 0.0, upper, quad)


def sigma_analytic(m, q, quad=None, method="four-term"):
    """sigma_{k,l}(t, s) for a known model.

    ``method="four-term"`` evaluates the double integral, the two
    compensator integrals and the joint-indicator expectation separately.
    ``method="joint"`` uses the fact that for continuous shocks the four
    terms collapse to the integral of dLambda_{k&l} / H-bar up to t ^ s,
    where k&l is the event "both indicators equal one". The two routes are
    independent and are compared in the tests.
    """
    quad = quad or QuadratureConfig()
    k, l, t, s = q.k, q.l, float(q.t), float(q.s)
    if m.survival_Y(max(t, s)) <= 0:
        raise DomainError("H-bar vanishes at max(t, s)")
    lo = min(t, s)
    if method == "joint" or k == l:
        if k == l:
            lam = _rate(m, EVENT_SHOCKS[k])
            return _quad(lambda u: lam(u) / m.survival_Y(u), 0.0, lo, quad)
        return _joint_event_term(m, k, l, lo, quad)
    if method != "four-term":
        raise ValueError("method must be 'four-term' or 'joint'")

    lam_k = _rate(m, EVENT_SHOCKS[k])
    lam_l = _rate(m, EVENT_SHOCKS[l])
    hbar = m.survival_Y

    def cum_k(x):
        return m.event_cumhaz(k, x)

    def cum_l(x):
        return m.event_cumhaz(l, x)

    # split the double integral at u = v: H(u v v) / (H(u) H(v)) is 1/H(v)
    # below the diagonal and 1/H(u) above it. The lower piece is
    # int lam_k(u) g_l(u ^ s) du with g_l = int_0 lam_l / H; integrating by
    # parts keeps every term one-dimensional.
    g_lo = _quad(lambda v: lam_l(v) / hbar(v), 0.0, lo, quad)
    below = cum_k(lo) * g_lo - _quad(lambda v: cum_k(v) * lam_l(v) / hbar(v), 0.0, lo, quad)
    if t > s:
        below += g_lo * (cum_k(t) - cum_k(s))
    above = _quad(lambda u: lam_k(u) * (cum_l(s) - cum_l(u)) / hbar(u), 0.0, lo, quad)
    double = below + above
    comp_k = _quad(lambda u: (cum_k(t) - cum_k(u)) / hbar(u) * lam_l(u), 0.0, lo, quad)
    comp_l = _quad(lambda u: (cum_l(s) - cum_l(u)) / hbar(u) * lam_k(u), 0.0, lo, quad)
    joint = _joint_event_term(m, k, l, lo, quad)
    return double - comp_k - comp_l + joint


# --------------------------------------------------------------------------
# plug-in


def _plugin_parts(ties):
    n = ties.n
    hbar_left = ties.at_risk / n
    w = ties.counts / ties.at_risk  # (5, J) jumps of Lambda_{k,n}
    return hbar_left, w


def sigma_plugin(sample, q, ties=None):
    """Plug-in estimate of sigma_{k,l}(t, s).

    Integrals become sums over the distinct observed times and the
    expectation becomes an average over observations.
    """
    tt = ties or tie_table(sample)
    k, l, t, s = q.k, q.l, float(q.t), float(q.s)
    if max(t, s) > tt.times[-1]:
        raise DomainError("the risk set is empty beyond the largest observation")
    hb, w = _plugin_parts(tt)
    jt = int(np.searchsorted(tt.times, t, side="right"))
    js = int(np.searchsorted(tt.times, s, side="right"))
    jm = min(jt, js)
    wk, wl = w[k - 1], w[l - 1]
    if k == l:
        # a running sum keeps the diagonal exactly monotone in t
        return float(np.cumsum(wk[:jm] / hb[:jm])[-1]) if jm else 0.0
    double = kernels.hazard_cross_sum(hb, np.ascontiguousarray(wk), np.ascontiguousarray(wl), jt, js)
    lam_k = np.cumsum(wk)
    lam_l = np.cumsum(wl)
    lk_t = lam_k[jt - 1] if jt else 0.0
    ll_s = lam_l[js - 1] if js else 0.0
    comp_k = float(np.sum((lk_t - lam_k[:jm]) / hb[:jm] * wl[:jm]))
    comp_l = float(np.sum((ll_s - lam_l[:jm]) / hb[:jm] * wk[:jm]))
    both = _both_counts(sample, tt, k, l)
    joint = float(np.sum(both[:jm] / hb[:jm] ** 2)) / tt.n
    return double - comp_k - comp_l + joint


def _both_counts(sample, tt, k, l):
    both = (sample.delta[k - 1] & sample.delta[l - 1]).astype(np.int64)
    return np.add.reduceat(both, tt.first)


# --------------------------------------------------------------------------
# joint survival


def _branch_sigma(sample, t, s, lower, ties):
    def sg(k, l, a, b):
        return sigma_plugin(sample, CovarianceQuery(k, l, a, b), ties)

    if lower:  # F4(t)^a1 < F5(s)^a2, the N3(s) term drives the minimum
        return (sg(3, 3, s, s) + sg(4, 4, t, t) + sg(5, 5, s, s)
                + 2.0 * (sg(4, 5, t, s) - sg(4, 3, t, s) - sg(5, 3, s, s)))
    return (sg(3, 3, t, t) + sg(4, 4, t, t) + sg(5, 5, s, s)
            + 2.0 * (sg(4, 5, t, s) - sg(4, 3, t, t) - sg(5, 3, s, t)))


def _boundary_draws(sample, t, s, ties, rng, size):
    # Gaussian limit of (N3(t), N3(s), N4(t), N5(s)); Z = min(N3(t), N3(s)) - N4(t) - N5(s)
    coords = [(3, t), (3, s), (4, t), (5, s)]
    cov = np.empty((4, 4))
    for i, (k, a) in enumerate(coords):
        for j, (l, b) in enumerate(coords):
            cov[i, j] = sigma_plugin(sample, CovarianceQuery(k, l, a, b), ties)
    cov = 0.5 * (cov + cov.T)
    vals, vecs = np.linalg.eigh(cov)
    root = vecs * np.sqrt(np.clip(vals, 0.0, None))
    z = rng.standard_normal((size, 4)) @ root.T
    return np.minimum(z[:, 0], z[:, 1]) - z[:, 2] - z[:, 3]


def joint_survival_variance(sample, t, s, level=0.95, rng=None, draws=100_000):
    """Point estimate, variance Sigma(t, s) and a CI for P(T > t, C > s).

    The limit law is stated for the ratio P_n / P, so the interval is
    P_n (1 -/+ z sqrt(Sigma / n)) with P_n standing in for the unknown P.
    When the two branch quantities F4(t)^a1 and F5(s)^a2 agree to a
    relative 1e-3 the limit is the minimum of two correlated Gaussians; its
    quantiles are then simulated with ``draws`` draws from ``rng``.
    """
    tt = tie_table(sample)
    est = fit_joint_survival(sample)
    t, s = float(t), float(s)
    if t < 0 or s < 0:
        raise DomainError("t and s must be nonnegative")
    if max(t, s) > tt.times[-1]:
        raise DomainError("t and s must lie within the observed range")
    n = tt.n
    point = float(est(t, s))
    if max(t, s) < tt.times[0]:
        # no event has been seen yet: the estimate is exactly 1
        return VarianceReport(point, 0.0, point, point, level)
    f4 = float(est.km4(t))
    f5 = float(est.km5(s))
    a1, a2 = (float(a) for a in est.alphas(t, s))
    with np.errstate(divide="ignore", invalid="ignore"):
        q1 = f4 ** a1 if f4 > 0 else 0.0
        q2 = f5 ** a2 if f5 > 0 else 0.0
    tie = abs(q1 - q2) <= BRANCH_TIE_RTOL * max(abs(q1), abs(q2))
    sigma = None if tie else _branch_sigma(sample, t, s, q1 < q2, tt)
    if sigma is not None and sigma > 0:
        half = norm.ppf(0.5 + level / 2) * np.sqrt(sigma / n)
        return VarianceReport(point, float(sigma), point * (1 - half), point * (1 + half), level)
    rng = rng if rng is not None else np.random.default_rng(0)
    z = _boundary_draws(sample, t, s, tt, rng, draws)
    lo_q, hi_q = np.quantile(z, [0.5 - level / 2, 0.5 + level / 2])
    rt = np.sqrt(n)
    return VarianceReport(
        point, float(np.var(z)), point * (1 - hi_q / rt), point * (1 - lo_q / rt), level,
        boundary_case=True, degenerate=sigma is not None,
    )


# --------------------------------------------------------------------------
# Kendall's tau


def _tau_inputs(sample):
    y = sample.y
    n = y.size
    d3 = sample.delta[2].astype(float)
    # H-bar_n(Y_i) = #{Y > Y_i} / n,  H_3n(Y_i) = #{Y <= Y_i, d3 = 1} / n
    hb = (n - np.searchsorted(y, y, side="right")) / n
    c3 = np.concatenate([[0.0], np.cumsum(d3)])
    h3 = c3[np.searchsorted(y, y, side="right")] / n
    return hb, h3, d3


def kendall_tau_variance(sample, level=0.95):
    """tau_n with the plug-in sigma^2 = I1 + I2 + I3 and a normal CI.

    Each I is a double sum over the empirical measures H_n and H_3n. The
    tail conditions needed for the limit theorem (an extreme value index
    below 1/4) cannot be checked from data and are assumed.
    """
    n = sample.n
    if n < 2:
        raise DataError("at least two observations are needed")
    hb, h3, d3 = _tau_inputs(sample)
    s1, s2, s3 = kernels.tau_variance_sums(hb, h3, d3)
    var = (4.0 * s1 + 4.0 * s2 + 8.0 * s3) / n**2
    tau = kendall_tau_hat(sample)
    degenerate = not var > 0
    half = norm.ppf(0.5 + level / 2) * np.sqrt(max(var, 0.0) / n)
    return VarianceReport(tau, float(var), tau - half, tau + half, level, degenerate=degenerate)
