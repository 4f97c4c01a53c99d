"""Command line front end: ``gmocens <subcommand> ...``.

Exit codes: 0 success, 2 bad configuration, 3 data problem, 4 numerical
failure. Outputs go to ``--out``, defaulting to ``$GMOCENS_OUTPUT_DIR`` or
``./gmocens-out``.
"""
import argparse
import json
import logging
import os
import sys
import urllib.request
from pathlib import Path

import numpy as np

from .exceptions import DataError, NumericalError, UnsupportedCaseError
from .gmo_core import (
    MoCopulaParams,
    alpha,
    joint_survival,
    kendall_tau_integral,
    kendall_tau_mo,
    parse_model,
    prob_simultaneous,
    survival_copula,
)
from .distributions import Exponential

log = logging.getLogger("gmocens")

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4


def _default_out():
    return os.environ.get("GMOCENS_OUTPUT_DIR", "gmocens-out")


def _data_dir():
    return Path(os.environ.get("GMOCENS_DATA_DIR", Path.home() / ".gmocens" / "data"))


def _int_list(text):
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _points(text):
    """``"0.1,0.2;0.3,0.3"`` -> [(0.1, 0.2), (0.3, 0.3)]."""
    out = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(f"bad evaluation point {chunk!r}")
        try:
            out.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad evaluation point {chunk!r}")
    return out


def build_parser():
    p = argparse.ArgumentParser(prog="gmocens", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def model_arg(sp):
        sp.add_argument("--model", default="a",
                        help='"a", "b" or three shocks such as "exp:1,exp:2,exp:3"')

    sim = sub.add_parser("simulate", help="Monte Carlo study of the estimators")
    model_arg(sim)
    sim.add_argument("--n", type=_int_list, default=[50, 100, 200], help="sample sizes, e.g. 50,100,200")
    sim.add_argument("--reps", type=int, default=100)
    sim.add_argument("--seed", type=int, default=20240101)
    sim.add_argument("--grid", type=int, default=100, help="grid points per axis for ISE/KL")
    sim.add_argument("--eval", type=_points, default=[], help='points "t,s;t,s" to report')
    sim.add_argument("--out", default=None)
    sim.add_argument("--format", choices=("csv", "json"), default="csv")
    sim.add_argument("--workers", type=int, default=1)
    sim.add_argument("--no-plots", action="store_true")

    tau = sub.add_parser("tau", help="Kendall's tau and P(T = C) of a model")
    model_arg(tau)

    ce = sub.add_parser("copula-eval", help="joint survival and copula at (t, s) points")
    model_arg(ce)
    ce.add_argument("--eval", type=_points, required=True, help='points "t,s;t,s"')
    ce.add_argument("--format", choices=("csv", "json"), default="csv")

    ue = sub.add_parser("uefa", help="analysis of the bundled soccer data")
    ue.add_argument("--data", default=None, help="CSV with two numeric columns (default: bundled)")
    ue.add_argument("--grid", type=int, default=100)
    ue.add_argument("--out", default=None)
    ue.add_argument("--format", choices=("csv", "json"), default="csv")
    ue.add_argument("--no-plots", action="store_true")

    ju = sub.add_parser("judges", help="competing-risk analysis of tenure data")
    ju.add_argument("--data", default=None, help="CSV with tenure and 0/1/2 status")
    ju.add_argument("--out", default=None)
    ju.add_argument("--format", choices=("csv", "json"), default="csv")
    ju.add_argument("--no-plots", action="store_true")

    fd = sub.add_parser("fetch-data", help="download the tenure data set")
    fd.add_argument("--url", default=None)
    fd.add_argument("--dest", default=None, help="target file (default: $GMOCENS_DATA_DIR/justices.csv)")
    return p


def _print_rows(rows, fmt):
    if fmt == "json":
        print(json.dumps(rows, indent=2))
        return
    if not rows:
        return
    keys = list(rows[0])
    print(",".join(keys))
    for r in rows:
        print(",".join(repr(r[k]) if isinstance(r[k], float) else str(r[k]) for k in keys))


def cmd_simulate(args):
    from .pipelines import ExperimentConfig, run_simulation

    cfg = ExperimentConfig(model=args.model, n_list=tuple(args.n), reps=args.reps, seed=args.seed,
                           grid_points=args.grid, eval_points=tuple(args.eval),
                           output_dir=args.out or _default_out(), fmt=args.format,
                           workers=args.workers, plots=not args.no_plots)
    res = run_simulation(cfg)
    print(f"true tau = {res.tau_true:.6f}")
    _print_rows(res.joint_table, "csv")
    _print_rows(res.tau_table, "csv")
    for f in res.files:
        log.info("wrote %s", f)
    return EXIT_OK


def cmd_tau(args):
    m = parse_model(args.model)
    out = {"model": args.model, "tau_integral": kendall_tau_integral(m),
           "p_simultaneous": prob_simultaneous(m)}
    if all(isinstance(x, Exponential) for x in (m.x1, m.x2, m.x3)):
        p = MoCopulaParams(alpha(m, 1, 1.0), alpha(m, 2, 1.0))
        out["tau_closed_form"] = kendall_tau_mo(p)
    print(json.dumps(out, indent=2))
    return EXIT_OK


def cmd_copula_eval(args):
    m = parse_model(args.model)
    rows = []
    for t, s in args.eval:
        u, v = m.marginal_survival_T(t), m.marginal_survival_C(s)
        rows.append({"t": t, "s": s, "joint_survival": joint_survival(m, t, s),
                     "u": float(u), "v": float(v), "copula": survival_copula(m, u, v)})
    _print_rows(rows, args.format)
    return EXIT_OK


def _summary(report):
    return {k: v for k, v in report.items() if k != "curves"}


def cmd_uefa(args):
    from .pipelines import run_uefa

    rep = run_uefa(args.data, out_dir=args.out or _default_out(), grid_points=args.grid,
                   fmt=args.format, plots=not args.no_plots)
    print(json.dumps(_summary(rep), indent=2))
    return EXIT_OK


def cmd_judges(args):
    from .pipelines import run_judges

    path = Path(args.data) if args.data else _data_dir() / "justices.csv"
    if not path.exists():
        raise DataError(f"{path} not found; run `gmocens fetch-data` or pass --data")
    rep = run_judges(path, out_dir=args.out or _default_out(), fmt=args.format,
                     plots=not args.no_plots)
    print(json.dumps(_summary(rep), indent=2))
    return EXIT_OK


def cmd_fetch(args):
    from .pipelines import JUDGES_URL

    url = args.url or JUDGES_URL
    dest = Path(args.dest) if args.dest else _data_dir() / "justices.csv"
    dest.parent.mkdir(parents=True, exist_ok=True)
    try:
        with urllib.request.urlopen(url, timeout=30) as resp:
            body = resp.read()
    except OSError as exc:
        raise DataError(f"download of {url} failed: {exc}") from exc
    dest.write_bytes(body)
    print(f"saved {len(body)} bytes to {dest}")
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "tau": cmd_tau,
    "copula-eval": cmd_copula_eval,
    "uefa": cmd_uefa,
    "judges": cmd_judges,
    "fetch-data": cmd_fetch,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    np.seterr(all="ignore")
    try:
        return COMMANDS[args.command](args)
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, UnsupportedCaseError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
