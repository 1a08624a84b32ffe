"""Ronkin function by trapezoidal quadrature over the real torus.

``N_f(x)`` is the mean of ``log|f|`` over ``{|z_j| = e^{x_j}}``. The
trapezoidal rule on an equispaced angle lattice is spectrally accurate when
the torus misses the zero set of ``f``, which is exactly the regime where
``N_f`` is affine.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from syz import kernels
from syz.laurent import LaurentPolynomial, NewtonPolytope, newton_polytope
from syz.parallel import map_ordered

DEFAULT_GRID = 512
MIN_GRID = 64
ORDER_STEP = 0.25
ORDER_THRESHOLD = 0.1
LOW_CONFIDENCE_FRACTION = 1e-3
ROW_BLOCK = 32


class TooCloseToAmoeba(ValueError):
    """Ronkin gradient is not within the threshold of a lattice vector."""


class ConsistencyError(RuntimeError):
    """A recovered order lies outside the Newton polytope."""


@dataclass(frozen=True)
class RonkinValue:
    value: float
    error: float
    excluded: int
    nodes: int

    @property
    def low_confidence(self) -> bool:
        return self.excluded > LOW_CONFIDENCE_FRACTION * self.nodes

    def __float__(self) -> float:
        return self.value


def _quadrature(f: LaurentPolynomial, x: np.ndarray, grid: int, workers=None) -> tuple[float, int]:
    n = f.num_vars
    exps = f.exponents.astype(np.int64)
    coefs = f.coefficients
    # factor out the dominant term magnitude to keep every node finite
    logw = exps @ x + np.log(np.abs(coefs))
    shift = float(np.max(logw))
    base = coefs * np.exp(exps @ x - shift)
    table = np.exp(2j * np.pi * np.arange(grid) / grid)
    lead = exps[:, : n - 1]
    last = exps[:, n - 1]
    rows = list(itertools.product(range(grid), repeat=n - 1))
    blocks = [rows[i : i + ROW_BLOCK] for i in range(0, len(rows), ROW_BLOCK)]

    def work(block):
        ks = np.array(block, dtype=np.int64).reshape(len(block), n - 1)
        idx = np.mod(ks @ lead.T, grid)  # (rows, T)
        rc = base[None, :] * table[idx]
        return kernels.torus_logabs_rows(rc, last, table)

    parts = map_ordered(work, blocks, workers)
    sums = np.concatenate([np.asarray(p[0]) for p in parts])
    bad = int(sum(int(np.sum(p[1])) for p in parts))
    total = grid**n
    good = total - bad
    if good == 0:
        return float("-inf"), bad
    return float(np.sum(sums)) / good + shift, bad


def ronkin_value(f: LaurentPolynomial, x: Sequence[float], grid: int = DEFAULT_GRID,
                 estimate_error: bool = True, workers: int | None = None) -> RonkinValue:
    """Ronkin function value with a grid-halving error estimate.

    Nodes where ``|f|`` underflows 1e-300 are dropped and counted; more than
    0.1% dropped marks the result low-confidence.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (f.num_vars,):
        raise ValueError("point dimension does not match polynomial")
    if f.num_vars > 3:
        raise ValueError("ronkin_value supports at most 3 variables")
    if grid < MIN_GRID:
        raise ValueError(f"grid must be at least {MIN_GRID}")
    value, bad = _quadrature(f, x, grid, workers)
    err = 0.0
    if estimate_error:
        coarse, _ = _quadrature(f, x, grid // 2, workers)
        err = abs(value - coarse)
    return RonkinValue(value, err, bad, grid**f.num_vars)


def ronkin_gradient(f: LaurentPolynomial, x: Sequence[float], h: float = ORDER_STEP,
                    grid: int = DEFAULT_GRID, workers: int | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    g = np.empty(f.num_vars)
    for i in range(f.num_vars):
        e = np.zeros(f.num_vars)
        e[i] = h
        up = ronkin_value(f, x + e, grid, estimate_error=False, workers=workers).value
        dn = ronkin_value(f, x - e, grid, estimate_error=False, workers=workers).value
        g[i] = (up - dn) / (2 * h)
    return g


def ronkin_order(f: LaurentPolynomial, x: Sequence[float], grid: int = DEFAULT_GRID,
                 polytope: NewtonPolytope | None = None, h: float = ORDER_STEP,
                 workers: int | None = None) -> tuple[int, ...]:
    """Order of the complement component containing ``x``.

    Raises:
        TooCloseToAmoeba: a gradient coordinate is more than 0.1 from an integer.
        ConsistencyError: the rounded gradient is not in the Newton polytope.
    """
    g = ronkin_gradient(f, x, h, grid, workers)
    nu = np.rint(g)
    dev = float(np.max(np.abs(g - nu)))
    if dev > ORDER_THRESHOLD:
        shown = ", ".join(f"{v:.6g}" for v in g)
        raise TooCloseToAmoeba(f"gradient ({shown}) deviates {dev:.3g} from a lattice point")
    order = tuple(int(v) for v in nu)
    P = polytope if polytope is not None else newton_polytope(f)
    if not P.contains(order):
        raise ConsistencyError(f"order {order} lies outside the Newton polytope")
    return order


def mahler_slice_value(f: LaurentPolynomial, x: Sequence[float], samples: int = 4096) -> float:
    """Independent Ronkin evaluation for n = 2 via Jensen's formula in ``w``.

    The inner circle average is exact: for ``p(w) = c prod (w - w_k)`` the mean
    of ``log|p|`` on ``|w| = e^y`` is ``log|c| + sum max(y, log|w_k|)``. Only
    the outer integral is discretized (midpoint rule in the first angle).
    Used as an oracle in tests; not on the hot path.
    """
    from syz.roots import univariate_roots

    if f.num_vars != 2:
        raise ValueError("mahler_slice_value needs n = 2")
    xv, yv = map(float, x)
    exps = f.exponents
    lo = int(exps[:, 1].min())
    deg = int(exps[:, 1].max()) - lo
    acc = 0.0
    for a in range(samples):
        th = 2 * np.pi * (a + 0.5) / samples
        z = np.exp(xv + 1j * th)
        c = np.zeros(deg + 1, dtype=complex)
        for (m1, m2), coef in f.terms:
            c[m2 - lo] += coef * z**m1
        acc += lo * yv
        nz = np.nonzero(c)[0]
        top, bot = nz.max(), nz.min()
        acc += np.log(abs(c[top])) + bot * yv
        if top > bot:
            for r in univariate_roots(c[bot : top + 1]):
                acc += max(yv, np.log(abs(r)))
    return acc / samples
