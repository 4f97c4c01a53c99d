import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from gmocens.distributions import (
    Beta,
    Exponential,
    Pareto,
    PointMassAtInfinity,
    Weibull,
    parse_distribution,
)
from gmocens.exceptions import DomainError

import oracles

CONTINUOUS = [
    Exponential(1.0),
    Exponential(4.0),
    Weibull(2.0, 1.0),
    Weibull(0.7, 3.0),
    Beta(2.0, 3.0),
    Beta(10.0, 10.0),
    Beta(2.5, 6.0),
    Pareto(1.0, 1.0),
    Pareto(0.5, 2.0),
]

SCIPY = {
    "Exponential(1.0)": stats.expon(),
    "Weibull(2.0, 1.0)": stats.weibull_min(2.0),
    "Beta(2.0, 3.0)": stats.beta(2, 3),
    "Pareto(0.5, 2.0)": stats.lomax(0.5, scale=2.0),
}


def _name(d):
    return type(d).__name__ + "(" + ", ".join(str(v) for v in vars(d).values()) + ")"


def test_cdf_examples():
    assert Exponential(1).cdf(0) == 0.0
    assert Exponential(4).cdf(0.1) == pytest.approx(oracles.EXP4_CDF_01, abs=1e-15)
    assert Beta(2, 3).cdf(0.5) == pytest.approx(oracles.BETA23_CDF_05, abs=1e-14)


def test_cumhaz_examples():
    assert Exponential(3).cumhaz(2) == pytest.approx(6.0)
    assert Beta(2, 3).cumhaz(0) == 0.0
    assert Weibull(2, 1).cumhaz(1) == pytest.approx(1.0)


def test_beta_cdf_polynomial():
    x = np.linspace(0, 1, 41)
    np.testing.assert_allclose(Beta(2, 3).cdf(x), oracles.beta23_cdf(x), atol=1e-13)


@pytest.mark.parametrize("d", CONTINUOUS, ids=_name)
def test_survival_complements_cdf(d):
    t = np.linspace(0, 3, 61) if d.terminal > 3 else np.linspace(0, 1, 61)
    np.testing.assert_allclose(d.sf(t), 1 - d.cdf(t), atol=1e-12)


@pytest.mark.parametrize("d", CONTINUOUS, ids=_name)
def test_cumhaz_is_minus_log_survival(d):
    t = np.linspace(0.01, 0.95, 30)
    np.testing.assert_allclose(d.cumhaz(t), -np.log(d.sf(t)), rtol=1e-10, atol=1e-14)
    assert np.all(np.diff(d.cumhaz(t)) > 0)


@pytest.mark.parametrize("d", CONTINUOUS, ids=_name)
def test_quantile_inverts_cdf(d):
    t = np.linspace(0.05, 0.95, 19)
    np.testing.assert_allclose(d.quantile(d.cdf(t)), t, atol=1e-9)


@pytest.mark.parametrize("d", CONTINUOUS, ids=_name)
def test_hazard_is_density_over_survival(d):
    t = np.array([0.1, 0.3, 0.7])
    np.testing.assert_allclose(d.hazard(t), d.pdf(t) / d.sf(t), rtol=1e-12)


@pytest.mark.parametrize("key", list(SCIPY))
def test_against_scipy(key):
    d = {_name(x): x for x in CONTINUOUS}[key]
    ref = SCIPY[key]
    t = np.linspace(0.01, 0.99, 25)
    np.testing.assert_allclose(d.cdf(t), ref.cdf(t), atol=1e-12)
    np.testing.assert_allclose(d.pdf(t), ref.pdf(t), rtol=1e-10)


@settings(max_examples=200, deadline=None)
@given(
    fam=st.sampled_from(["exp", "weibull", "beta", "pareto"]),
    p1=st.floats(0.3, 8.0),
    p2=st.floats(0.3, 8.0),
)
def test_cdf_of_quantile_is_identity(fam, p1, p2):
    d = {"exp": lambda: Exponential(p1), "weibull": lambda: Weibull(p1, p2),
         "beta": lambda: Beta(p1, p2), "pareto": lambda: Pareto(p1, p2)}[fam]()
    p = np.linspace(0.01, 0.99, 50)
    np.testing.assert_allclose(d.cdf(d.quantile(p)), p, atol=1e-8)


@pytest.mark.parametrize("d,mean", [(Exponential(1.0), 1.0), (Beta(10, 10), 0.5)], ids=["exp", "beta"])
def test_sample_mean(d, mean):
    x = d.sample(np.random.default_rng(7), 100_000)
    assert abs(x.mean() - mean) < 3 * x.std() / math.sqrt(x.size)


@pytest.mark.parametrize("d", CONTINUOUS, ids=_name)
def test_ks_distance(d):
    x = d.sample(np.random.default_rng(11), 100_000)
    ks = stats.kstest(x, d.cdf).statistic
    assert ks < 0.01


def test_sampling_is_deterministic():
    a = Beta(2.5, 6).sample(np.random.default_rng(3), 10)
    b = Beta(2.5, 6).sample(np.random.default_rng(3), 10)
    assert np.array_equal(a, b)


def test_point_mass_at_infinity():
    d = PointMassAtInfinity()
    assert np.all(np.isinf(d.sample(np.random.default_rng(0), 3)))
    assert d.cdf(5.0) == 0.0
    assert d.sf(1e6) == 1.0
    assert d.cumhaz(2.0) == 0.0


def test_cumhaz_infinite_past_support():
    assert Beta(2, 3).cumhaz(1.0) == math.inf
    assert Beta(2, 3).hazard(1.5) == math.inf


@pytest.mark.parametrize("bad", [-0.1, math.nan, math.inf])
def test_domain_errors(bad):
    with pytest.raises(DomainError):
        Exponential(1).cdf(bad)


@pytest.mark.parametrize("ctor", [lambda: Exponential(0), lambda: Weibull(-1, 1),
                                  lambda: Beta(0, 1), lambda: Pareto(1, 0)])
def test_invalid_parameters(ctor):
    with pytest.raises(ValueError):
        ctor()


def test_parse_distribution():
    assert parse_distribution("exp:2") == Exponential(2.0)
    assert parse_distribution("beta:2:3") == Beta(2.0, 3.0)
    assert isinstance(parse_distribution("inf"), PointMassAtInfinity)
    with pytest.raises(ValueError):
        parse_distribution("gamma:1:1")
    with pytest.raises(ValueError):
        parse_distribution("beta:2")
