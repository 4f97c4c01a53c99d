import numpy as np
import pytest

from gmocens import _kernels_py, kernels

ACCEPTANCE_LINES = []

try:
    from gmocens import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

BACKENDS = [pytest.param(_kernels_py, id="python")]
if _kernels_c is not None:
    BACKENDS.append(pytest.param(_kernels_c, id="cython"))


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run a test once per available kernel backend."""
    mod = request.param
    monkeypatch.setattr(kernels, "hazard_cross_sum", mod.hazard_cross_sum)
    monkeypatch.setattr(kernels, "tau_variance_sums", mod.tau_variance_sums)
    return mod


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
