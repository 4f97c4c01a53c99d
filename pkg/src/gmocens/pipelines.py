"""Simulation campaigns and the two real-data analyses.

``run_simulation`` repeats draw -> estimate -> score for each sample size
and writes tables, curves and plots. ``run_uefa`` and ``run_judges`` run
the estimators on bivariate soccer data and on competing-risk tenure data.
"""
import csv
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
from scipy import optimize

from . import reporting
from .distributions import Exponential
from .estimators import (
    empirical_joint_survival,
    empirical_survival,
    fit_joint_survival,
    kendall_tau_hat,
    nelson_aalen,
    tie_table,
)
from .exceptions import DataError
from .gmo_core import GmoModel, alpha, joint_survival, kendall_tau_integral, parse_model
from .metrics import GridSpec, bias_mse, ise, kl
from .sampling import draw_sample, from_bivariate, from_status_coded

__all__ = [
    "ExperimentConfig",
    "MoMleFit",
    "run_simulation",
    "replicate",
    "fit_mo_exponential",
    "fit_mo_exponential_bivariate",
    "read_numeric_csv",
    "run_uefa",
    "run_judges",
    "alpha_curve",
    "alpha_flatness",
    "default_uefa_path",
    "JUDGES_URL",
]

JUDGES_URL = "https://grodri.github.io/datasets/justices.csv"


# --------------------------------------------------------------------------
# simulation


@dataclass(frozen=True)
class ExperimentConfig:
    model: str = "a"
    n_list: tuple = (50, 100, 200)
    reps: int = 100
    seed: int = 20240101
    grid_points: int = 100
    eval_points: tuple = ()
    output_dir: str = None
    fmt: str = "csv"
    workers: int = 1
    plots: bool = True
    curve_points: int = 50
    surface_points: int = 25

    def __post_init__(self):
        if self.reps < 1:
            raise ValueError("reps must be at least 1")
        if not self.n_list:
            raise ValueError("n_list must not be empty")
        if any(int(n) < 2 for n in self.n_list):
            raise ValueError("sample sizes must be at least 2")
        if self.curve_points < 2 or self.surface_points < 2:
            raise ValueError("curve and surface grids need at least 2 points")
        if self.fmt not in ("csv", "json"):
            raise ValueError("fmt must be 'csv' or 'json'")
        parse_model(self.model)  # fail early on a bad model string

    def as_dict(self):
        d = asdict(self)
        d.pop("output_dir")
        d.pop("workers")  # does not change any number
        d["n_list"] = list(d["n_list"])
        d["eval_points"] = [list(p) for p in d["eval_points"]]
        return d


def _curve_grid(m, points):
    hi = float(m.quantile_Y(0.9))
    return np.linspace(hi / points, hi, points)


def _nan_ratio(num, den):
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(den > 0, num / np.where(den > 0, den, 1.0), np.nan)


def replicate(model, n, rep, seed, grid_points=100, eval_points=(), tgrid=None, sgrid=None):
    """One replication: draw a sample with ``default_rng(seed + rep)`` and score it."""
    m = parse_model(model) if isinstance(model, str) else model
    rng = np.random.default_rng(seed + rep)
    smp = draw_sample(m, n, rng)
    est = fit_joint_survival(smp)
    grid = GridSpec.from_sample(smp, grid_points)

    def truth(t, s):
        return joint_survival(m, t, s)

    out = {
        "rep": rep,
        "ise": ise(est, truth, grid),
        "kl": kl(est, truth, grid),
        "tau": kendall_tau_hat(smp),
        "evals": [float(est(t, s)) for t, s in eval_points],
    }
    if tgrid is not None:
        out["km4"] = np.asarray(est.km4(tgrid))
        out["km5"] = np.asarray(est.km5(tgrid))
        out["alpha1"] = _nan_ratio(est.na3(tgrid), est.na4(tgrid))
        out["alpha2"] = _nan_ratio(est.na3(tgrid), est.na5(tgrid))
    if sgrid is not None:
        out["surface"] = np.asarray(est(*np.meshgrid(sgrid, sgrid, indexing="ij")), dtype=float)
    return out


def _replicate_star(args):
    return replicate(*args)


@dataclass
class SimulationResult:
    config: ExperimentConfig
    tau_true: float
    joint_table: list
    tau_table: list
    curve_table: list
    eval_table: list
    surface_table: list = field(default_factory=list)
    files: list = field(default_factory=list)


def run_simulation(cfg):
    """Run every (model, n) cell of ``cfg`` and write the outputs if asked.

    Replication r uses ``numpy.random.default_rng(seed + r)`` for every n,
    so results do not depend on the number of workers.
    """
    m = parse_model(cfg.model)
    tau_true = kendall_tau_integral(m)
    tgrid = _curve_grid(m, cfg.curve_points)
    sgrid = _curve_grid(m, cfg.surface_points)
    joint_rows, tau_rows, curve_rows, eval_rows, surface_rows = [], [], [], [], []
    pool = ProcessPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    try:
        for n in cfg.n_list:
            last = n == max(cfg.n_list)
            jobs = [(cfg.model, int(n), r, cfg.seed, cfg.grid_points, tuple(cfg.eval_points), tgrid,
                     sgrid if last else None) for r in range(cfg.reps)]
            if pool is None:
                res = [_replicate_star(j) for j in jobs]
            else:
                res = list(pool.map(_replicate_star, jobs))
            res.sort(key=lambda r: r["rep"])
            if last:
                surf = np.mean([r["surface"] for r in res], axis=0)
                truth = joint_survival(m, *np.meshgrid(sgrid, sgrid, indexing="ij"))
                for i, t in enumerate(sgrid):
                    for j, s in enumerate(sgrid):
                        surface_rows.append({"model": cfg.model, "n": int(n), "t": float(t), "s": float(s),
                                             "mean_estimate": float(surf[i, j]),
                                             "truth": float(truth[i, j])})
            joint_rows.append({
                "model": cfg.model, "n": int(n), "reps": cfg.reps,
                "ise": float(np.mean([r["ise"] for r in res])),
                "kl": float(np.mean([r["kl"] for r in res])),
            })
            taus = [r["tau"] for r in res]
            b, mse = bias_mse(taus, tau_true)
            tau_rows.append({
                "model": cfg.model, "n": int(n), "reps": cfg.reps, "tau_true": tau_true,
                "tau_mean": float(np.mean(taus)), "bias": b, "mse": mse,
            })
            truths = {
                "survival_T": m.marginal_survival_T(tgrid),
                "survival_C": m.marginal_survival_C(tgrid),
                "alpha1": alpha(m, 1, tgrid),
                "alpha2": alpha(m, 2, tgrid),
            }
            for key, name in (("km4", "survival_T"), ("km5", "survival_C"),
                              ("alpha1", "alpha1"), ("alpha2", "alpha2")):
                stack = np.vstack([r[key] for r in res])
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", RuntimeWarning)
                    mean = np.nanmean(stack, axis=0)
                for t, e, tr in zip(tgrid, mean, truths[name]):
                    curve_rows.append({"model": cfg.model, "n": int(n), "curve": name,
                                       "t": float(t), "estimate": float(e), "truth": float(tr)})
            for i, (t, s) in enumerate(cfg.eval_points):
                vals = [r["evals"][i] for r in res]
                eval_rows.append({"model": cfg.model, "n": int(n), "t": float(t), "s": float(s),
                                  "mean_estimate": float(np.mean(vals)),
                                  "truth": float(joint_survival(m, t, s))})
    finally:
        if pool is not None:
            pool.shutdown()
    result = SimulationResult(cfg, tau_true, joint_rows, tau_rows, curve_rows, eval_rows, surface_rows)
    if cfg.output_dir is not None:
        _write_simulation(result)
    return result


def _write_simulation(res):
    cfg = res.config
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    conf = cfg.as_dict()
    tag = _safe_tag(cfg.model)
    files = [
        reporting.write_table(res.joint_table, out / f"joint_law_{tag}", conf, cfg.seed, cfg.fmt),
        reporting.write_table(res.tau_table, out / f"kendall_tau_{tag}", conf, cfg.seed, cfg.fmt),
        reporting.write_table(res.curve_table, out / f"curves_{tag}", conf, cfg.seed, cfg.fmt),
        reporting.write_table(res.surface_table, out / f"surface_{tag}", conf, cfg.seed, cfg.fmt),
    ]
    if res.eval_table:
        files.append(reporting.write_table(res.eval_table, out / f"evaluations_{tag}", conf,
                                           cfg.seed, cfg.fmt))
    summary = {"tau_true": res.tau_true, "joint_law": res.joint_table,
               "kendall_tau": res.tau_table, "evaluations": res.eval_table}
    files.append(reporting.write_json(summary, out / f"summary_{tag}.json", conf, cfg.seed))
    if cfg.plots:
        files.extend(_plot_curves(res.curve_table, out, tag, max(cfg.n_list)))
    res.files = [str(f) for f in files]


def _safe_tag(text):
    keep = "".join(ch if ch.isalnum() else "_" for ch in text)
    return keep.strip("_") or "model"


def _plot_curves(rows, out, tag, n):
    made = []
    for kind, names in (("survival", ("survival_T", "survival_C")), ("alpha", ("alpha1", "alpha2"))):
        series = []
        for name, color in zip(names, ("C0", "C1")):
            sel = [r for r in rows if r["curve"] == name and r["n"] == n]
            t = [r["t"] for r in sel]
            series.append((f"{name} mean estimate", t, [r["estimate"] for r in sel], color + "-"))
            series.append((f"{name} true", t, [r["truth"] for r in sel], color + "--"))
        made.append(reporting.line_plot(out / f"{kind}_{tag}.svg", series,
                                        title=f"model {tag}, n = {n}"))
    return made


# --------------------------------------------------------------------------
# exponential MO fits


@dataclass(frozen=True)
class MoMleFit:
    lambda1: float
    lambda2: float
    lambda3: float
    method: str = "event-type"

    @property
    def rates(self):
        return (self.lambda1, self.lambda2, self.lambda3)

    def model(self):
        """The fitted exponential shocks as a ``GmoModel``."""
        return GmoModel(*(Exponential(r) for r in self.rates), name="mo-exponential")


def fit_mo_exponential(sample):
    """Exponential MO fit from (Y, event type) only.

    Y ~ Exp(l1 + l2 + l3) and the event type is multinomial with
    probabilities proportional to the rates, so l_k = n_k / sum(Y).
    """
    total = float(np.sum(sample.y))
    if not total > 0:
        raise DataError("total observed time must be positive")
    d4, d5 = sample.delta[3].astype(bool), sample.delta[4].astype(bool)
    counts = (np.sum(d4 & ~d5), np.sum(d5 & ~d4), np.sum(d4 & d5))
    if min(counts) == 0:
        warnings.warn("an event type was never observed; its rate estimate is 0",
                      RuntimeWarning, stacklevel=2)
    return MoMleFit(*(float(c) / total for c in counts), method="event-type")


def fit_mo_exponential_bivariate(t, c):
    """Maximum likelihood for the MO exponential law from full (T, C) pairs.

    The likelihood has three pieces: l1 (l2 + l3) exp(-l1 t - (l2 + l3) c)
    for t < c, the mirror image for t > c, and l3 exp(-(l1 + l2 + l3) t) on
    the diagonal. It is maximized over log-rates.
    """
    t, c = np.asarray(t, dtype=float), np.asarray(c, dtype=float)
    lt, gt, eq = t < c, t > c, t == c
    n1, n2, n3 = lt.sum(), gt.sum(), eq.sum()
    st_lt, sc_lt = t[lt].sum(), c[lt].sum()
    st_gt, sc_gt = t[gt].sum(), c[gt].sum()
    s_eq = t[eq].sum()
    if not (t.sum() + c.sum()) > 0:
        raise DataError("total observed time must be positive")

    def nll(theta):
        l1, l2, l3 = np.exp(theta)
        ll = (n1 * (math.log(l1) + math.log(l2 + l3)) - l1 * st_lt - (l2 + l3) * sc_lt
              + n2 * (math.log(l2) + math.log(l1 + l3)) - l2 * sc_gt - (l1 + l3) * st_gt
              + n3 * math.log(l3) - (l1 + l2 + l3) * s_eq)
        return -ll

    start = fit_mo_exponential(from_bivariate(t, c)).rates
    x0 = np.log(np.maximum(start, 1e-8))
    res = optimize.minimize(nll, x0, method="Nelder-Mead",
                            options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 20000})
    res = optimize.minimize(nll, res.x, method="BFGS", options={"gtol": 1e-10})
    return MoMleFit(*(float(v) for v in np.exp(res.x)), method="bivariate")


# --------------------------------------------------------------------------
# real data


def read_numeric_csv(path):
    """Read a headed CSV; return (header, dict of numeric columns in file order)."""
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if len(rows) < 2:
        raise DataError(f"{path} needs a header row and at least one data row")
    header = [h.strip() for h in rows[0]]
    body = [r for r in rows[1:] if any(x.strip() for x in r)]
    if any(len(r) != len(header) for r in body):
        raise DataError(f"{path}: rows do not all have {len(header)} fields")
    numeric = {}
    for j, name in enumerate(header):
        try:
            numeric[name] = np.array([float(r[j]) for r in body])
        except ValueError:
            continue
    return header, numeric


def default_uefa_path():
    return resources.files("gmocens") / "data" / "uefa.csv"


def alpha_curve(sample, which, t):
    """alpha-hat on ``t`` with NaN where the denominator hazard is still 0."""
    tt = tie_table(sample)
    return _nan_ratio(nelson_aalen(sample, 3, tt)(t), nelson_aalen(sample, 3 + which, tt)(t))


def alpha_flatness(sample, which, central=0.8):
    """max - min of alpha-hat over observed times in the central part of Y."""
    lo, hi = np.quantile(sample.y, [(1 - central) / 2, (1 + central) / 2])
    t = np.unique(sample.y[(sample.y >= lo) & (sample.y <= hi)])
    a = alpha_curve(sample, which, t)
    a = a[np.isfinite(a)]
    return float(a.max() - a.min()) if a.size else float("nan")


def run_uefa(path=None, out_dir=None, grid_points=100, fmt="csv", plots=True):
    """Compare the nonparametric and MO-exponential joint survival on soccer data.

    The CSV needs a header and exactly two numeric columns: the minute of
    the first kick goal (T) and of the first home goal (C).
    """
    path = Path(path) if path is not None else default_uefa_path()
    _, cols = read_numeric_csv(path)
    if len(cols) != 2:
        raise DataError(f"expected two numeric columns, found {len(cols)}: {list(cols)}")
    (t_name, t), (c_name, c) = cols.items()
    smp = from_bivariate(t, c)
    est = fit_joint_survival(smp)
    fit_ev = fit_mo_exponential(smp)
    fit_bv = fit_mo_exponential_bivariate(t, c)
    mo = fit_bv.model()

    def p_ml(a, b):
        return joint_survival(mo, a, b)

    def p_em(a, b):
        return empirical_joint_survival(t, c, a, b)

    grid = GridSpec.from_sample(smp, grid_points)
    times = np.unique(smp.y)
    report = {
        "data": str(path),
        "columns": [t_name, c_name],
        "n": smp.n,
        "counts": {"T<C": int(np.sum(t < c)), "T>C": int(np.sum(t > c)), "T=C": int(np.sum(t == c))},
        "tau_n": kendall_tau_hat(smp),
        "fit_event_type": list(fit_ev.rates),
        "fit_bivariate": list(fit_bv.rates),
        "grid": [grid.lower, grid.upper, grid.points],
        "ise_nonparametric": ise(est, p_em, grid),
        "ise_mo_exponential": ise(p_ml, p_em, grid),
        "kl_nonparametric": kl(est, p_em, grid),
        "kl_mo_exponential": kl(p_ml, p_em, grid),
    }
    curves = []
    km_t = est.km4(times)
    em_t = empirical_survival(t, times)
    mo_t = mo.marginal_survival_T(times)
    a1 = alpha_curve(smp, 1, times)
    a2 = alpha_curve(smp, 2, times)
    a1_mo = fit_bv.lambda3 / (fit_bv.lambda1 + fit_bv.lambda3)
    a2_mo = fit_bv.lambda3 / (fit_bv.lambda2 + fit_bv.lambda3)
    for i, x in enumerate(times):
        curves.append({"t": float(x), "km_T": float(km_t[i]), "empirical_T": float(em_t[i]),
                       "mo_T": float(mo_t[i]), "alpha1": float(a1[i]), "alpha2": float(a2[i]),
                       "alpha1_mo": a1_mo, "alpha2_mo": a2_mo})
    sg = np.linspace(grid.lower, grid.upper, 25)
    tt, ss = np.meshgrid(sg, sg, indexing="ij")
    surfaces = [{"t": float(a), "s": float(b), "nonparametric": float(x), "mo_exponential": float(y),
                 "empirical": float(z)}
                for a, b, x, y, z in zip(tt.ravel(), ss.ravel(), np.ravel(est(tt, ss)),
                                         np.ravel(p_ml(tt, ss)), np.ravel(p_em(tt, ss)))]
    if out_dir is not None:
        _write_real(report, curves, out_dir, "uefa", fmt, plots,
                    [("KM of T", "km_T", "C0-"), ("empirical T", "empirical_T", "k--"),
                     ("MO exponential T", "mo_T", "C1:")],
                    [("alpha1", "alpha1", "C0-"), ("alpha2", "alpha2", "C1-"),
                     ("alpha1 MO", "alpha1_mo", "C0:"), ("alpha2 MO", "alpha2_mo", "C1:")])
        reporting.write_table(surfaces, Path(out_dir) / "uefa_surfaces",
                              {"analysis": "uefa", "data": report["data"]}, fmt=fmt)
    report["curves"] = curves
    return report


_STATUS_NAMES = ("status", "event", "reason", "censor", "outcome")
_TIME_NAMES = ("tenure", "time", "years", "duration", "length", "service")


def _pick(cols, names, exclude=()):
    for name in cols:
        if name in exclude:
            continue
        low = name.lower()
        if any(key in low for key in names):
            return name
    return None


def run_judges(path, out_dir=None, fmt="csv", plots=True):
    """Competing-risk analysis of tenure data coded 0/1/2.

    The status column is found by name (status, event, ...) or as the only
    numeric column with values in {0, 1, 2}; the time column by name
    (tenure, time, years, ...).
    """
    path = Path(path)
    _, cols = read_numeric_csv(path)
    status_col = _pick(cols, _STATUS_NAMES)
    if status_col is None:
        coded = [k for k, v in cols.items() if np.all(np.isin(v, (0, 1, 2)))]
        if len(coded) != 1:
            raise DataError("cannot identify the status column")
        status_col = coded[0]
    time_col = _pick(cols, _TIME_NAMES, exclude=(status_col,))
    if time_col is None:
        raise DataError("cannot identify the tenure column")
    smp = from_status_coded(cols[time_col], cols[status_col].astype(int))
    est = fit_joint_survival(smp)
    times = np.unique(smp.y)
    report = {
        "data": str(path),
        "columns": [time_col, status_col],
        "n": smp.n,
        "counts": {str(k): int(np.sum(cols[status_col] == k)) for k in (0, 1, 2)},
        "tau_n": kendall_tau_hat(smp),
        "alpha1_flatness": alpha_flatness(smp, 1),
        "alpha2_flatness": alpha_flatness(smp, 2),
    }
    a1, a2 = alpha_curve(smp, 1, times), alpha_curve(smp, 2, times)
    km4, km5 = est.km4(times), est.km5(times)
    curves = [{"t": float(x), "km_T": float(km4[i]), "km_C": float(km5[i]),
               "alpha1": float(a1[i]), "alpha2": float(a2[i])} for i, x in enumerate(times)]
    if out_dir is not None:
        _write_real(report, curves, out_dir, "judges", fmt, plots,
                    [("KM of T (death)", "km_T", "C0-"), ("KM of C (retirement)", "km_C", "C1-")],
                    [("alpha1", "alpha1", "C0-"), ("alpha2", "alpha2", "C1-")])
    report["curves"] = curves
    return report


def _write_real(report, curves, out_dir, tag, fmt, plots, surv_series, alpha_series):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    conf = {"analysis": tag, "data": report["data"]}
    reporting.write_json(report, out / f"{tag}_report.json", conf)
    reporting.write_table(curves, out / f"{tag}_curves", conf, fmt=fmt)
    if plots:
        t = [r["t"] for r in curves]
        for kind, spec in (("survival", surv_series), ("alpha", alpha_series)):
            series = [(label, t, [r[key] for r in curves], style) for label, key, style in spec]
            reporting.line_plot(out / f"{tag}_{kind}.svg", series, title=tag)
