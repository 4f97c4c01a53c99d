"""Backend selection for the O(n^2) variance sums.

The Cython extension is used when it was built; otherwise, or when the
environment variable ``GMOCENS_DISABLE_EXT`` is set to a non-empty value
other than ``0``, the numpy implementation is used. ``BACKEND`` names the
active choice.
"""
import os

from . import _kernels_py

_disabled = os.environ.get("GMOCENS_DISABLE_EXT", "") not in ("", "0")

if _disabled:
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

hazard_cross_sum = _impl.hazard_cross_sum
tau_variance_sums = _impl.tau_variance_sums

__all__ = ["BACKEND", "hazard_cross_sum", "tau_variance_sums"]
