"""Nonparametric estimators built from an ``ObservedSample``.

Nelson-Aalen and Kaplan-Meier estimators are computed per event type with
ties aggregated at distinct observed times: at a time shared by several
observations, the jump uses the number of type-k events there and the risk
set n - (first index) of the tie group. For untied data this is the usual
order-statistic formula.
"""
from dataclasses import dataclass

import numpy as np

from .exceptions import DataError, DomainError

__all__ = [
    "StepEstimate",
    "TieTable",
    "tie_table",
    "nelson_aalen",
    "kaplan_meier",
    "alpha_hat",
    "JointSurvivalEstimate",
    "fit_joint_survival",
    "joint_survival_hat",
    "kendall_tau_hat",
    "empirical_joint_survival",
    "empirical_survival",
]


@dataclass(frozen=True, eq=False)
class StepEstimate:
    """Right-continuous step function.

    ``values[j]`` is the value on [times[j], times[j+1]); before ``times[0]``
    the function equals ``value_before_first``. Some steps may have zero
    height: every distinct observed time is kept so that estimators built on
    the same sample share one grid.
    """

    times: np.ndarray
    values: np.ndarray
    value_before_first: float = 0.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(np.isnan(t)):
            raise DomainError("cannot evaluate a step function at NaN")
        idx = np.searchsorted(self.times, t, side="right") - 1
        out = np.where(idx < 0, self.value_before_first, self.values[np.maximum(idx, 0)])
        return float(out) if out.ndim == 0 else out

    def left(self, t):
        """Left limit f(t-)."""
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.times, t, side="left") - 1
        out = np.where(idx < 0, self.value_before_first, self.values[np.maximum(idx, 0)])
        return float(out) if out.ndim == 0 else out

    @property
    def jumps(self):
        return np.diff(self.values, prepend=self.value_before_first)


@dataclass(frozen=True, eq=False)
class TieTable:
    """Distinct times with risk sets and per-type event counts."""

    times: np.ndarray      # distinct observed times, increasing
    first: np.ndarray      # 0-based index of the first observation of each group
    at_risk: np.ndarray    # n - first
    counts: np.ndarray     # shape (5, J): number of type-k events per group
    n: int


def tie_table(sample):
    y = sample.y
    if y.size == 0:
        raise DataError("empty sample")
    new = np.empty(y.size, dtype=bool)
    new[0] = True
    new[1:] = y[1:] != y[:-1]
    first = np.flatnonzero(new)
    counts = np.add.reduceat(sample.delta.astype(np.int64), first, axis=1)
    return TieTable(y[first], first, y.size - first, counts, y.size)


def _check_k(k):
    if k not in (1, 2, 3, 4, 5):
        raise ValueError("event type must be in 1..5")


def nelson_aalen(sample, k, ties=None):
    """Cumulative hazard estimate of event type k.

    Lambda_{k,n}(t) = sum over distinct times u <= t of d_k(u) / r(u).
    """
    _check_k(k)
    tt = ties or tie_table(sample)
    vals = np.cumsum(tt.counts[k - 1] / tt.at_risk)
    return StepEstimate(tt.times, vals, 0.0)


def kaplan_meier(sample, k, ties=None):
    """Product-limit survival of event type k, set to 0 from the last time on.

    The final value is forced to 0 even when the largest observation is not
    a type-k event. This is a deliberate convention that biases the far
    right tail downward.
    """
    _check_k(k)
    tt = ties or tie_table(sample)
    vals = np.cumprod(1.0 - tt.counts[k - 1] / tt.at_risk)
    vals[-1] = 0.0
    return StepEstimate(tt.times, vals, 1.0)


def _ratio(num, den):
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)


def alpha_hat(sample, which, t):
    """Lambda_{3,n}(t) / Lambda_{4,n}(t) for which=1, Lambda_{3,n} / Lambda_{5,n} for which=2."""
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    tt = tie_table(sample)
    den = nelson_aalen(sample, 3 + which, tt)(t)
    if np.any(np.asarray(den) <= 0):
        raise DomainError("alpha_hat is undefined before the first event of the denominator type")
    out = nelson_aalen(sample, 3, tt)(t) / den
    return out


def _pow_zero(base, expo):
    # 0 ** 0 is taken as 0: no survival is left past the last observation
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(base > 0, np.power(np.maximum(base, 0.0), expo), 0.0)


@dataclass(frozen=True, eq=False)
class JointSurvivalEstimate:
    """Plug-in estimate of P(T > t, C > s).

    P_n(t, s) = min(F5(s) F4(t)^(1 - a1(t)), F4(t) F5(s)^(1 - a2(s)))
    with a1 = Lambda3 / Lambda4 and a2 = Lambda3 / Lambda5. Where a
    denominator is still zero the ratio is taken as 0.
    """

    km4: StepEstimate
    km5: StepEstimate
    na3: StepEstimate
    na4: StepEstimate
    na5: StepEstimate

    def alphas(self, t, s):
        return _ratio(self.na3(t), self.na4(t)), _ratio(self.na3(s), self.na5(s))

    def __call__(self, t, s):
        t = np.asarray(t, dtype=float)
        s = np.asarray(s, dtype=float)
        if np.any(t < 0) or np.any(s < 0):
            raise DomainError("joint survival arguments must be nonnegative")
        f4 = np.asarray(self.km4(t))
        f5 = np.asarray(self.km5(s))
        a1, a2 = self.alphas(t, s)
        out = np.minimum(f5 * _pow_zero(f4, 1.0 - a1), f4 * _pow_zero(f5, 1.0 - a2))
        return float(out) if out.ndim == 0 else out


def fit_joint_survival(sample):
    tt = tie_table(sample)
    return JointSurvivalEstimate(
        kaplan_meier(sample, 4, tt),
        kaplan_meier(sample, 5, tt),
        nelson_aalen(sample, 3, tt),
        nelson_aalen(sample, 4, tt),
        nelson_aalen(sample, 5, tt),
    )


def joint_survival_hat(est, t, s):
    if not isinstance(est, JointSurvivalEstimate):
        est = fit_joint_survival(est)
    return est(t, s)


def kendall_tau_hat(sample):
    """tau_n = (2/n) sum_i d4_(i) d5_(i) (n - i + 1) / n over the sorted sample.

    Ranks follow the stable sort of the input, so tied observations keep
    their input order; ties are not averaged here.
    """
    n = sample.n
    if n < 1:
        raise DataError("empty sample")
    i = np.arange(1, n + 1)
    both = sample.delta[3] * sample.delta[4]
    return float(2.0 / n * np.sum(both * (n - i + 1)) / n)


def empirical_survival(x, t):
    """(1/n) #{x_i > t}."""
    xs = np.sort(np.asarray(x, dtype=float))
    t = np.asarray(t, dtype=float)
    out = 1.0 - np.searchsorted(xs, t, side="right") / xs.size
    return float(out) if out.ndim == 0 else out


def empirical_joint_survival(t_raw, c_raw, t, s, chunk=1 << 22):
    """(1/n) #{T_i > t, C_i > s} from fully observed pairs."""
    tr = np.asarray(t_raw, dtype=float)
    cr = np.asarray(c_raw, dtype=float)
    if tr.shape != cr.shape or tr.size == 0:
        raise DataError("t_raw and c_raw must be nonempty and of equal length")
    t, s = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(s, dtype=float))
    tf, sf = t.ravel(), s.ravel()
    out = np.empty(tf.size)
    step = max(1, chunk // tr.size)
    for a in range(0, tf.size, step):
        b = a + step
        hit = (tr[:, None] > tf[None, a:b]) & (cr[:, None] > sf[None, a:b])
        out[a:b] = hit.mean(axis=0)
    out = out.reshape(t.shape)
    return float(out) if out.ndim == 0 else out
