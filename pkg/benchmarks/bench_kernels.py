"""Compare the compiled and pure-Python kernel backends.

Usage::

    python benchmarks/bench_kernels.py [--repeat N]

Prints best-of-N wall time per kernel and backend, the speedup, and the
largest disagreement between the two backends' outputs.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from syz.amoeba import viro_polynomial
from syz.kernels import get_backend
from syz.laurent import dilated_simplex_points


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def aberth_case(rows=2000, degree=5, seed=0):
    """Slice polynomials of the Viro quintic, as the amoeba raster produces them."""
    f = viro_polynomial(dilated_simplex_points(degree))
    coef = dict(f.terms)
    rng = np.random.default_rng(seed)
    x = rng.uniform(-6, 6, rows)
    phase = np.exp(1j * rng.uniform(0, 2 * np.pi, rows))
    z = np.exp(x) * phase
    out = np.zeros((rows, degree + 1), dtype=complex)
    for (i, j), c in coef.items():
        out[:, degree - j] += c * z ** i
    return out


def torus_case(rows=256, terms=21, grid=512, seed=0):
    rng = np.random.default_rng(seed)
    rc = rng.normal(size=(rows, terms)) + 1j * rng.normal(size=(rows, terms))
    exps = rng.integers(0, 6, size=terms).astype(np.int64)
    table = np.exp(2j * np.pi * np.arange(grid) / grid)
    return rc, exps, table


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    py = get_backend("python")
    try:
        cy = get_backend("compiled")
    except ImportError:
        print("compiled backend not built; run `pip install -e . --no-build-isolation`")
        return 1

    coeffs = aberth_case()
    rc, exps, table = torus_case()
    cases = [
        ("aberth_batch (2000 x deg 5)", lambda k: k.aberth_batch(coeffs),
         lambda a, b: np.max(np.abs(np.sort_complex(a[0]) - np.sort_complex(b[0])))),
        ("torus_logabs_rows (256 x 512)", lambda k: k.torus_logabs_rows(rc, exps, table),
         lambda a, b: np.max(np.abs(np.asarray(a[0]) - np.asarray(b[0])))),
    ]
    print(f"{'kernel':32s} {'python [ms]':>12s} {'compiled [ms]':>14s} {'speedup':>8s} {'max diff':>10s}")
    for name, run, diff in cases:
        tp, op = best_of(lambda: run(py), args.repeat)
        tc, oc = best_of(lambda: run(cy), args.repeat)
        print(f"{name:32s} {1e3 * tp:12.2f} {1e3 * tc:14.2f} {tp / tc:8.1f} {diff(op, oc):10.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
