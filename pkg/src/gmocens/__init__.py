"""Dependent censoring under the generalized Marshall-Olkin shock model.

A lifetime T = min(X1, X3) is censored by C = min(X2, X3), where X3 is a
shock common to both. The package covers the analytic model (copula,
alpha functions, Kendall's tau), nonparametric estimators from censored
data, plug-in variances, and the simulation and data pipelines.
"""
__version__ = "0.1.0"

from .distributions import Beta, Exponential, Pareto, PointMassAtInfinity, Weibull
from .estimators import (
    alpha_hat,
    empirical_joint_survival,
    fit_joint_survival,
    joint_survival_hat,
    kaplan_meier,
    kendall_tau_hat,
    nelson_aalen,
)
from .exceptions import DataError, DomainError, GmoError, NumericalError, UnsupportedCaseError
from .gmo_core import (
    GmoModel,
    MoCopulaParams,
    QuadratureConfig,
    alpha,
    extreme_limit,
    joint_survival,
    kendall_tau_integral,
    kendall_tau_mo,
    model_a,
    model_b,
    mo_to_gmo_construction,
    prob_simultaneous,
    survival_copula,
)
from .inference import (
    CovarianceQuery,
    joint_survival_variance,
    kendall_tau_variance,
    sigma_analytic,
    sigma_plugin,
)
from .kernels import BACKEND
from .metrics import GridSpec, bias_mse, ise, kl
from .sampling import ObservedSample, draw_sample, from_bivariate, from_status_coded
