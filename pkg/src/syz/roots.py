"""Univariate root finding: batched Aberth-Ehrlich with a companion-matrix fallback."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from syz import kernels

MAX_SWEEPS = 200


def companion_roots(coeffs: np.ndarray) -> np.ndarray:
    """Roots via eigenvalues of the companion matrix (ascending coefficients)."""
    c = np.asarray(coeffs, dtype=np.complex128)
    d = c.size - 1
    comp = np.zeros((d, d), dtype=np.complex128)
    comp[1:, :-1] = np.eye(d - 1)
    comp[:, -1] = -c[:-1] / c[-1]
    return np.linalg.eigvals(comp)


def solve_batch(coeffs: np.ndarray) -> np.ndarray:
    """Roots of a batch of same-degree polynomials, shape (B, d).

    Ends of every row must be nonzero. Rows whose Aberth iteration stalls
    are re-solved with companion-matrix eigenvalues.
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    if coeffs.shape[1] < 2:
        return np.empty((coeffs.shape[0], 0), dtype=np.complex128)
    if coeffs.shape[1] == 2:
        return (-coeffs[:, 0] / coeffs[:, 1])[:, None]
    roots, ok = kernels.aberth_batch(coeffs, MAX_SWEEPS, 1e-12)
    roots = np.asarray(roots)
    for b in np.nonzero(~np.asarray(ok, dtype=bool))[0]:
        roots[b] = companion_roots(coeffs[b])
    return roots


def univariate_roots(coeffs: Sequence[complex]) -> np.ndarray:
    """All complex roots of ``c_0 + c_1 w + ... + c_d w^d``, with multiplicity.

    Coefficients are in ascending order of degree. The result is sorted by
    real part, then imaginary part.

    Raises:
        ValueError: for degree 0, all-zero input, or a zero leading coefficient.
    """
    c = np.asarray(list(coeffs), dtype=np.complex128)
    if c.size == 0 or not np.any(c):
        raise ValueError("polynomial is identically zero")
    if c.size < 2:
        raise ValueError("degree must be at least 1")
    if c[-1] == 0:
        raise ValueError("leading coefficient must be nonzero")
    nz = int(np.argmax(c != 0))
    reduced = c[nz:]
    if reduced.size > 1:
        found = solve_batch(reduced[None, :])[0]
    else:
        found = np.empty(0, dtype=np.complex128)
    roots = np.concatenate([np.zeros(nz, dtype=np.complex128), found])
    order = np.lexsort((roots.imag, roots.real))
    return roots[order]
