import math

import numpy as np
import pytest

from gmocens.estimators import fit_joint_survival
from gmocens.gmo_core import joint_survival, model_a
from gmocens.metrics import GridSpec, bias_mse, ise, kl
from gmocens.sampling import draw_sample


def test_ise_of_identical_is_zero():
    g = GridSpec(0, 1, 20)
    f = lambda t, s: np.exp(-t - s)  # noqa: E731
    assert ise(f, f, g) == 0.0
    assert kl(f, f, g) == 0.0


def test_ise_constant_offset():
    g = GridSpec(0.0, 2.0, 50)
    assert ise(lambda t, s: 0.0 * t, lambda t, s: 0.1, g) == pytest.approx(0.04, rel=1e-12)


def test_kl_constant_ratio():
    g = GridSpec(0.0, 1.0, 16)
    assert kl(lambda t, s: 0.5, lambda t, s: 0.25, g) == pytest.approx(0.5 * math.log(2), rel=1e-12)


def test_kl_can_be_negative():
    g = GridSpec(0.0, 1.0, 16)
    assert kl(lambda t, s: 0.25, lambda t, s: 0.5, g) < 0


def test_kl_clamp():
    g = GridSpec(0.0, 1.0, 16)
    assert kl(lambda t, s: 0.0, lambda t, s: 0.3, g) == 0.0
    assert np.isfinite(kl(lambda t, s: 0.3, lambda t, s: 0.0, g))


@pytest.mark.parametrize("points", [50, 100, 200])
def test_ise_grid_refinement(points):
    # integral of (e^{-t-s})^2 over [0,1]^2 is ((1 - e^{-2}) / 2)^2
    exact = ((1 - math.exp(-2)) / 2) ** 2
    g = GridSpec(0.0, 1.0, points)
    assert ise(lambda t, s: np.exp(-t - s), lambda t, s: 0.0, g) == pytest.approx(exact, rel=2.0 / points**2)


def test_ise_of_estimator_is_stable_under_refinement():
    m = model_a()
    s = draw_sample(m, 200, np.random.default_rng(0))
    est = fit_joint_survival(s)
    truth = lambda t, u: joint_survival(m, t, u)  # noqa: E731
    a = ise(est, truth, GridSpec.from_sample(s, 100))
    b = ise(est, truth, GridSpec.from_sample(s, 400))
    assert a == pytest.approx(b, rel=0.05)


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(1.0, 1.0)
    with pytest.raises(ValueError):
        GridSpec(0.0, 1.0, 8)


def test_grid_midpoints():
    g = GridSpec(0.0, 1.6, 16)
    np.testing.assert_allclose(g.midpoints()[:2], [0.05, 0.15])
    assert g.step == pytest.approx(0.1)


def test_bias_mse():
    b, m = bias_mse([0.4, 0.6, 0.8], 0.5)
    assert b == pytest.approx(0.1)
    assert m == pytest.approx((0.01 + 0.01 + 0.09) / 3)
    with pytest.raises(ValueError):
        bias_mse([], 0.0)


def test_grid_refinement_shifted_pair():
    m = model_a()
    f = lambda t, s: joint_survival(m, t, s)  # noqa: E731
    g = lambda t, s: joint_survival(m, t + 0.02, s + 0.02)  # noqa: E731
    coarse = ise(f, g, GridSpec(0.0, 0.5, 100))
    fine = ise(f, g, GridSpec(0.0, 0.5, 200))
    assert coarse > 0
    assert abs(fine - coarse) / coarse < 0.05
    assert kl(f, g, GridSpec(0.0, 0.5, 100)) > 0
