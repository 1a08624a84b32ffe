"""Pure numpy implementations of the hot kernels.

Interfaces match the compiled ``syz._kernels`` module exactly; the package
picks one of the two at import time (see :mod:`syz.kernels`).
"""

from __future__ import annotations

import numpy as np

_TINY = 1e-300


def newton_polygon_radii(coeffs: np.ndarray) -> np.ndarray:
    """Root-modulus estimates from the upper hull of ``(k, log|c_k|)``.

    ``coeffs`` has shape (B, d+1), ascending powers, nonzero ends. Returns
    shape (B, d) radii, nondecreasing along each row.
    """
    B, m = coeffs.shape
    d = m - 1
    with np.errstate(divide="ignore"):
        L = np.log(np.abs(coeffs))
    idx = np.arange(m)
    span = (idx[None, :] - idx[:, None]).astype(float)
    with np.errstate(invalid="ignore", divide="ignore"):
        S = (L[:, None, :] - L[:, :, None]) / span[None, :, :]
    radii = np.empty((B, d))
    for k in range(1, m):
        block = S[:, :k, k:]
        sigma = np.min(np.max(block, axis=2), axis=1)
        radii[:, k - 1] = np.exp(-sigma)
    return radii


def _ratio(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Newton ratio p(z)/p'(z), evaluated through the reversed polynomial when |z| > 1."""
    B, m = coeffs.shape
    d = m - 1
    big = np.abs(z) > 1.0
    zz = np.where(big, 1.0 / np.where(z == 0, 1.0, z), z)
    p = np.zeros(z.shape, dtype=np.complex128)
    dp = np.zeros(z.shape, dtype=np.complex128)
    q = np.zeros(z.shape, dtype=np.complex128)
    dq = np.zeros(z.shape, dtype=np.complex128)
    for k in range(d, -1, -1):
        ck = coeffs[:, k][:, None]
        dp = dp * zz + p
        p = p * zz + ck
    for k in range(0, d + 1):
        ck = coeffs[:, k][:, None]
        dq = dq * zz + q
        q = q * zz + ck
    small_ratio = p / np.where(dp == 0, _TINY, dp)
    den = d * q - zz * dq
    big_ratio = q / (zz * np.where(den == 0, _TINY, den))
    return np.where(big, big_ratio, small_ratio)


def aberth_batch(coeffs: np.ndarray, max_sweeps: int = 200, tol: float = 1e-12):
    """Simultaneous Aberth-Ehrlich iteration over a batch of polynomials.

    Each polynomial stops independently once every correction is below
    ``tol`` relative to its root, so results do not depend on which other
    polynomials share the batch.

    Returns ``(roots, converged)`` with shapes (B, d) and (B,).
    """
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    B, m = coeffs.shape
    d = m - 1
    scale = np.max(np.abs(coeffs), axis=1, keepdims=True)
    coeffs = coeffs / scale
    radii = newton_polygon_radii(coeffs)
    ang = 2.0 * np.pi * np.arange(d) / d + 0.4
    z = radii * np.exp(1j * ang)[None, :]
    active = np.ones(B, dtype=bool)
    converged = np.zeros(B, dtype=bool)
    eye = np.eye(d, dtype=bool)
    for _ in range(max_sweeps):
        ids = np.nonzero(active)[0]
        if ids.size == 0:
            break
        za = z[ids]
        r = _ratio(coeffs[ids], za)
        diff = za[:, :, None] - za[:, None, :]
        diff[:, eye] = 1.0
        inv = 1.0 / diff
        inv[:, eye] = 0.0
        s = inv.sum(axis=2)
        w = r / (1.0 - r * s)
        w = np.where(np.isfinite(w), w, 0.0)
        znew = za - w
        z[ids] = znew
        done = np.all(np.abs(w) <= tol * np.abs(znew), axis=1)
        converged[ids[done]] = True
        active[ids[done]] = False
    return z, converged


def torus_logabs_rows(row_coeffs: np.ndarray, phase_exps: np.ndarray, table: np.ndarray):
    """Sum of ``log|sum_t c_t e^{i m_t theta_k}|`` over ``theta_k = 2 pi k / grid``.

    ``row_coeffs`` (R, T) carries everything except the last-angle phase;
    ``phase_exps`` (T,) are the last-variable exponents; ``table`` holds
    ``exp(2 pi i j / grid)``. Nodes with modulus below 1e-300 are dropped.
    Returns ``(sums, excluded)`` per row.
    """
    grid = table.shape[0]
    k = np.arange(grid, dtype=np.int64)
    idx = np.mod(np.outer(phase_exps.astype(np.int64), k), grid)
    phases = table[idx]
    vals = row_coeffs @ phases
    mod = np.abs(vals)
    bad = mod < _TINY
    with np.errstate(divide="ignore"):
        logs = np.where(bad, 0.0, np.log(np.where(bad, 1.0, mod)))
    return logs.sum(axis=1), bad.sum(axis=1).astype(np.int64)
