import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from gmocens._special import betainc, betaincc


@pytest.mark.parametrize("a,b", [(2, 3), (10, 10), (2.5, 6), (0.5, 0.5), (0.3, 7.0), (50, 1.5)])
def test_matches_scipy(a, b):
    x = np.linspace(0, 1, 201)
    np.testing.assert_allclose(betainc(a, b, x), special.betainc(a, b, x), rtol=0, atol=1e-13)


def test_endpoints_and_scalar():
    assert betainc(2, 3, 0.0) == 0.0
    assert betainc(2, 3, 1.0) == 1.0
    assert isinstance(betainc(2, 3, 0.5), float)
    assert betainc(2, 3, 0.5) == pytest.approx(0.6875, abs=1e-14)


def test_complement_keeps_small_tail():
    # 1 - I_x underflows to 0 in a naive subtraction, the complement does not
    tail = betaincc(2, 3, 0.999999)
    assert 0 < tail < 1e-15
    assert tail == pytest.approx(special.betaincc(2, 3, 0.999999), rel=1e-10)


def test_rejects_bad_shape():
    with pytest.raises(ValueError):
        betainc(0, 1, 0.5)


@settings(max_examples=60, deadline=None)
@given(
    a=st.floats(0.6, 20), b=st.floats(0.6, 20), x=st.floats(0.001, 0.999),
)
def test_against_quadrature_of_density(a, b, x):
    dens = lambda u: u ** (a - 1) * (1 - u) ** (b - 1) / special.beta(a, b)
    ref, _ = integrate.quad(dens, 0, x, epsabs=1e-14, epsrel=1e-12)
    assert betainc(a, b, x) == pytest.approx(ref, abs=1e-10)
