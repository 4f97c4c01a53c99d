"""Writing tables, metadata sidecars and SVG line plots.

Every file written through :func:`write_table` or :func:`write_json` gets a
``<name>.meta.json`` sidecar carrying the seed, a hash of the configuration
and the package version. Plots are optional and never touch the numbers.
"""
import csv
import hashlib
import io
import json
from pathlib import Path

__all__ = ["config_hash", "write_table", "write_json", "write_sidecar", "line_plot"]


def _version():
    from . import __version__

    return __version__


def config_hash(config):
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def write_sidecar(path, config, seed=None):
    path = Path(path)
    meta = {
        "file": path.name,
        "seed": seed,
        "config_hash": config_hash(config),
        "version": _version(),
        "config": config,
    }
    side = path.with_name(path.name + ".meta.json")
    side.write_text(json.dumps(meta, indent=2, sort_keys=True, default=str) + "\n")
    return side


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def write_table(rows, path, config, seed=None, fmt="csv"):
    """Write a list of dicts as long-form CSV (or a JSON list) plus sidecar."""
    path = Path(path)
    if fmt == "json":
        path = path.with_suffix(".json")
        path.write_text(json.dumps(rows, indent=2) + "\n")
    elif fmt == "csv":
        path = path.with_suffix(".csv")
        buf = io.StringIO()
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: _fmt(v) for k, v in r.items()})
        path.write_text(buf.getvalue())
    else:
        raise ValueError(f"unknown table format {fmt!r}")
    write_sidecar(path, config, seed)
    return path


def write_json(obj, path, config, seed=None):
    path = Path(path)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, default=float) + "\n")
    write_sidecar(path, config, seed)
    return path


def line_plot(path, series, title="", xlabel="t", ylabel=""):
    """Save an SVG with one line per (label, x, y, style) entry.

    The SVG is made reproducible by fixing the hash salt and dropping the
    creation date.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.hashsalt": "gmocens", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6, 4))
        for label, x, y, style in series:
            ax.plot(x, y, style, label=label, lw=1.2)
        ax.set_title(title)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.legend(fontsize=8)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return Path(path)
