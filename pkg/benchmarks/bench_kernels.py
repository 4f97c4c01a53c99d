"""Time the compiled and numpy kernels on simulated model-a samples.

    python benchmarks/bench_kernels.py --sizes 200,1000,5000 --repeat 5

For each sample size the two O(n^2) kernels (the cross-hazard double sum
behind off-diagonal plug-in covariances and the three double sums of the
Kendall tau variance) are timed with each backend, the results are
checked for agreement, and the best of ``--repeat`` runs is reported.
"""
import argparse
import timeit

import numpy as np

from gmocens import _kernels_py
from gmocens.estimators import tie_table
from gmocens.gmo_core import model_a
from gmocens.inference import _plugin_parts, _tau_inputs
from gmocens.sampling import draw_sample

try:
    from gmocens import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def _inputs(n, seed):
    s = draw_sample(model_a(), n, np.random.default_rng(seed))
    hb, w = _plugin_parts(tie_table(s))
    cross = (hb, np.ascontiguousarray(w[3]), np.ascontiguousarray(w[4]), hb.size, hb.size)
    return cross, _tau_inputs(s)


def _best(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="200,1000,5000")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)
    sizes = [int(v) for v in args.sizes.split(",")]

    backends = [("numpy", _kernels_py)]
    if _kernels_c is not None:
        backends.append(("cython", _kernels_c))
    else:
        print("compiled extension not built; timing the numpy backend only")

    print(f"{'kernel':<18}{'n':>7}" + "".join(f"{name + ' [ms]':>16}" for name, _ in backends)
          + ("    speed-up" if len(backends) == 2 else ""))
    for n in sizes:
        cross, tau = _inputs(n, args.seed)
        for label, attr, inp in (("hazard_cross_sum", "hazard_cross_sum", cross),
                                 ("tau_variance_sums", "tau_variance_sums", tau)):
            outs = [np.asarray(getattr(mod, attr)(*inp), dtype=float) for _, mod in backends]
            if not all(np.allclose(o, outs[0], rtol=1e-10, atol=1e-13) for o in outs):
                raise SystemExit(f"backends disagree for {label} at n = {n}")
            times = [_best(getattr(mod, attr), inp, args.repeat) for _, mod in backends]
            row = f"{label:<18}{n:>7}" + "".join(f"{1e3 * t:>16.3f}" for t in times)
            if len(times) == 2:
                row += f"{times[0] / times[1]:>11.1f}x"
            print(row)


if __name__ == "__main__":
    main()
