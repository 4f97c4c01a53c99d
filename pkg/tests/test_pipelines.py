import json
import warnings

import numpy as np
import pytest

from gmocens.exceptions import DataError
from gmocens.gmo_core import GmoModel, model_a
from gmocens.distributions import Exponential
from gmocens.pipelines import (
    ExperimentConfig,
    alpha_flatness,
    fit_mo_exponential,
    fit_mo_exponential_bivariate,
    read_numeric_csv,
    replicate,
    run_judges,
    run_simulation,
    run_uefa,
)
from gmocens.reporting import config_hash
from gmocens.sampling import draw_sample, from_indicators


def test_fit_mo_exponential_consistency():
    s = draw_sample(model_a(), 100_000, np.random.default_rng(0))
    fit = fit_mo_exponential(s)
    np.testing.assert_allclose(fit.rates, (1, 2, 3), rtol=0.03)


def test_fit_bivariate_consistency():
    s = draw_sample(GmoModel(Exponential(0.5), Exponential(1.0), Exponential(0.8)), 20_000,
                    np.random.default_rng(1))
    fit = fit_mo_exponential_bivariate(s.t_raw, s.c_raw)
    np.testing.assert_allclose(fit.rates, (0.5, 1.0, 0.8), rtol=0.05)


def test_fit_bivariate_is_a_stationary_point():
    s = draw_sample(model_a(), 500, np.random.default_rng(2))
    t, c = s.t_raw, s.c_raw
    fit = fit_mo_exponential_bivariate(t, c)
    l1, l2, l3 = fit.rates
    # score for l3 vanishes at the optimum
    lt, gt, eq = t < c, t > c, t == c
    score3 = (lt.sum() / (l2 + l3) - c[lt].sum() + gt.sum() / (l1 + l3) - t[gt].sum()
              + eq.sum() / l3 - t[eq].sum())
    assert abs(score3) < 1e-6 * len(t)


def test_fit_warns_on_missing_type():
    s = from_indicators([1.0, 2.0], [1, 0], [0, 1])
    with pytest.warns(RuntimeWarning):
        fit = fit_mo_exponential(s)
    assert fit.lambda3 == 0.0


def test_replicate_is_deterministic():
    a = replicate("a", 50, 3, 7, grid_points=20)
    b = replicate("a", 50, 3, 7, grid_points=20)
    assert a == b


def test_simulation_small(tmp_path):
    cfg = ExperimentConfig(model="a", n_list=(30, 60), reps=4, grid_points=20, eval_points=((0.1, 0.1),),
                           output_dir=str(tmp_path), plots=True, curve_points=10)
    res = run_simulation(cfg)
    assert res.tau_true == pytest.approx(0.5, abs=1e-9)
    assert [r["n"] for r in res.joint_table] == [30, 60]
    names = sorted(p.name for p in tmp_path.iterdir())
    for stem in ("joint_law_a.csv", "kendall_tau_a.csv", "curves_a.csv", "evaluations_a.csv", "surface_a.csv",
                 "summary_a.json", "survival_a.svg", "alpha_a.svg"):
        assert stem in names
    meta = json.loads((tmp_path / "joint_law_a.csv.meta.json").read_text())
    assert meta["seed"] == cfg.seed
    assert meta["config_hash"] == config_hash(cfg.as_dict())
    assert len(res.surface_table) == cfg.surface_points**2
    assert all(r["n"] == 60 for r in res.surface_table)


def test_simulation_outputs_are_byte_identical(tmp_path):
    outs = []
    for i in (1, 2):
        d = tmp_path / str(i)
        run_simulation(ExperimentConfig(model="b", n_list=(40,), reps=3, grid_points=16,
                                        output_dir=str(d), curve_points=8))
        outs.append({p.name: p.read_bytes() for p in d.iterdir()})
    assert outs[0] == outs[1]


def test_workers_do_not_change_results():
    base = dict(model="a", n_list=(40,), reps=4, grid_points=16, curve_points=8)
    one = run_simulation(ExperimentConfig(**base))
    two = run_simulation(ExperimentConfig(**base, workers=2))
    assert one.joint_table == two.joint_table and one.tau_table == two.tau_table


@pytest.mark.parametrize("kw", [dict(reps=0), dict(n_list=()), dict(n_list=(1,)), dict(fmt="xml"),
                                dict(model="c"), dict(surface_points=1)])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        ExperimentConfig(**kw)


def test_uefa_report():
    rep = run_uefa(plots=False)
    assert rep["n"] == 37
    assert rep["counts"] == {"T<C": 6, "T>C": 17, "T=C": 14}
    assert 0 < rep["tau_n"] < 1
    assert all(r > 0 for r in rep["fit_bivariate"])
    assert rep["ise_nonparametric"] >= 0 and rep["ise_mo_exponential"] >= 0


def test_uefa_writes_files(tmp_path):
    run_uefa(out_dir=tmp_path, grid_points=20, fmt="json")
    names = {p.name for p in tmp_path.iterdir()}
    assert {"uefa_report.json", "uefa_curves.json", "uefa_surfaces.json", "uefa_survival.svg",
            "uefa_alpha.svg"} <= names


def test_uefa_rejects_wrong_columns(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(DataError):
        run_uefa(p)


def _fake_judges(path, n=400, seed=0):
    r = np.random.default_rng(seed)
    s = draw_sample(model_a(), n, r)
    status = np.where(s.delta[2] == 1, 0, np.where(s.delta[0] == 1, 1, 2))
    rows = ["name,tenure,status"] + [f"j{i},{y * 30:.3f},{k}" for i, (y, k) in enumerate(zip(s.y, status))]
    path.write_text("\n".join(rows) + "\n")


def test_judges_pipeline_on_synthetic_data(tmp_path):
    p = tmp_path / "justices.csv"
    _fake_judges(p)
    rep = run_judges(p, out_dir=tmp_path / "out", plots=False)
    assert rep["columns"] == ["tenure", "status"]
    assert rep["n"] == 400
    # exponential shocks give flat alpha curves
    assert rep["alpha1_flatness"] < 0.35


def test_judges_status_by_values(tmp_path):
    p = tmp_path / "j.csv"
    p.write_text("years,code\n1,1\n2,2\n3,0\n4,1\n")
    assert run_judges(p)["columns"] == ["years", "code"]


def test_read_numeric_csv_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("a,b\n1\n")
    with pytest.raises(DataError):
        read_numeric_csv(p)
    with pytest.raises(DataError):
        read_numeric_csv(tmp_path / "missing.csv")


def test_alpha_flatness_exponential():
    s = draw_sample(model_a(), 5000, np.random.default_rng(3))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert alpha_flatness(s, 2) < 0.1
