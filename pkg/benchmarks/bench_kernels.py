"""Compare the compiled kernels with the numpy fallback.

Run from the repository root after building the extension::

    python benchmarks/bench_kernels.py [--repeat 5]

Reports best-of-N wall time per call for each kernel and for a full
scalar-curvature evaluation (the latter in a subprocess per backend,
since the backend is chosen at import).
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from lande_rterm.geometry import _kernels_py

try:
    from lande_rterm.geometry import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

END_TO_END = (
    "import timeit\n"
    "from lande_rterm.geometry import InertiaTriple, scalar_curvature, BACKEND\n"
    "I = InertiaTriple(1.0, 1.0, 0.01)\n"
    "t = min(timeit.repeat(lambda: scalar_curvature(I, [1.0, 0.3, 1.2, 2.0]), number=50, repeat={r}))\n"
    "print(BACKEND, t / 50)\n"
)


def _best(fn, number, repeat):
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def bench_kernels(repeat):
    rng = np.random.default_rng(0)
    pts = np.column_stack([rng.uniform(0.2, 2.9, 49), rng.uniform(0, 6.2, 49),
                           rng.uniform(0.2, 2.9, 49), rng.uniform(0, 6.2, 49)])
    g = _kernels_py.coupled_metric_batch(pts, 1.0, 1.0, 0.01)[0][0]
    dg = rng.normal(size=(4, 4, 4))
    dg = 0.5 * (dg + dg.transpose(0, 2, 1))
    ddg = rng.normal(size=(4, 4, 4, 4))
    ddg = 0.5 * (ddg + ddg.transpose(1, 0, 2, 3))
    cases = {
        "coupled_metric_batch (49 pts)": lambda k: (lambda: k.coupled_metric_batch(pts, 1.0, 1.0, 0.01)),
        "curvature_from_jets": lambda k: (lambda: k.curvature_from_jets(g, dg, ddg)),
    }
    rows = []
    for name, make in cases.items():
        t_py = _best(make(_kernels_py), 200, repeat)
        t_c = _best(make(_kernels_c), 200, repeat) if _kernels_c else float("nan")
        rows.append((name, t_py, t_c))
    return rows


def bench_end_to_end(repeat):
    out = {}
    for pure in (False, True):
        env = dict(os.environ)
        env.pop("LANDE_RTERM_PURE", None)
        if pure:
            env["LANDE_RTERM_PURE"] = "1"
        res = subprocess.run([sys.executable, "-c", END_TO_END.format(r=repeat)],
                             env=env, capture_output=True, text=True, check=True)
        backend, t = res.stdout.split()
        out[backend] = float(t)
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    print(f"{'kernel':34s} {'numpy [us]':>12s} {'cython [us]':>12s} {'speedup':>8s}")
    for name, t_py, t_c in bench_kernels(args.repeat):
        print(f"{name:34s} {t_py * 1e6:12.1f} {t_c * 1e6:12.1f} {t_py / t_c:8.1f}x")
    e2e = bench_end_to_end(args.repeat)
    t_py = e2e.get("python", float("nan"))
    t_c = e2e.get("cython", float("nan"))
    print(f"{'scalar_curvature (end to end)':34s} {t_py * 1e6:12.1f} {t_c * 1e6:12.1f} "
          f"{t_py / t_c:8.1f}x")


if __name__ == "__main__":
    main()
