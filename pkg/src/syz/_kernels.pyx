# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; same interface as syz._fallback."""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, exp, fabs, INFINITY, isfinite, M_PI
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double complex cexp(double complex)

cdef double TINY = 1e-300


cdef void _radii(double complex* c, int d, double* L, double* out) noexcept nogil:
    cdef int i, j, k
    cdef double s, mx, mn
    for i in range(d + 1):
        s = cabs(c[i])
        L[i] = log(s) if s > 0 else -INFINITY
    for k in range(1, d + 1):
        mn = INFINITY
        for i in range(k):
            mx = -INFINITY
            for j in range(k, d + 1):
                s = (L[j] - L[i]) / (j - i)
                if s > mx:
                    mx = s
            if mx < mn:
                mn = mx
        out[k - 1] = exp(-mn)


cdef double complex _ratio(double complex* c, int d, double complex z) noexcept nogil:
    cdef double complex p = 0, dp = 0, zz, den
    cdef int k
    if cabs(z) > 1.0:
        zz = 1.0 / z
        for k in range(0, d + 1):
            dp = dp * zz + p
            p = p * zz + c[k]
        den = d * p - zz * dp
        if den == 0:
            den = TINY
        return p / (zz * den)
    for k in range(d, -1, -1):
        dp = dp * z + p
        p = p * z + c[k]
    if dp == 0:
        dp = TINY
    return p / dp


cdef int _aberth_one(double complex* c, int d, double complex* z, double complex* w,
                     double* L, double* rad, int max_sweeps, double tol) noexcept nogil:
    cdef int k, j, it
    cdef double complex r, s, diff
    cdef double scale = 0, a
    cdef bint done
    for k in range(d + 1):
        a = cabs(c[k])
        if a > scale:
            scale = a
    for k in range(d + 1):
        c[k] = c[k] / scale
    _radii(c, d, L, rad)
    for k in range(d):
        z[k] = rad[k] * cexp(1j * (2.0 * M_PI * k / d + 0.4))
    for it in range(max_sweeps):
        for k in range(d):
            r = _ratio(c, d, z[k])
            s = 0
            for j in range(d):
                if j != k:
                    diff = z[k] - z[j]
                    if diff == 0:
                        diff = 1.0
                    s = s + 1.0 / diff
            w[k] = r / (1.0 - r * s)
            if not (isfinite(w[k].real) and isfinite(w[k].imag)):
                w[k] = 0
        done = True
        for k in range(d):
            z[k] = z[k] - w[k]
            if cabs(w[k]) > tol * cabs(z[k]):
                done = False
        if done:
            return 1
    return 0


def aberth_batch(coeffs, int max_sweeps=200, double tol=1e-12):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] c = np.array(coeffs, dtype=np.complex128, order="C", copy=True)
    cdef int B = c.shape[0]
    cdef int m = c.shape[1]
    cdef int d = m - 1
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] roots = np.empty((B, d), dtype=np.complex128)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] conv = np.zeros(B, dtype=np.uint8)
    cdef double complex* w = <double complex*> malloc(d * sizeof(double complex))
    cdef double* L = <double*> malloc(m * sizeof(double))
    cdef double* rad = <double*> malloc(d * sizeof(double))
    cdef int b
    try:
        with nogil:
            for b in range(B):
                conv[b] = _aberth_one(&c[b, 0], d, &roots[b, 0], w, L, rad, max_sweeps, tol)
    finally:
        free(w)
        free(L)
        free(rad)
    return roots, conv.astype(bool)


def torus_logabs_rows(row_coeffs, phase_exps, table):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] rc = np.ascontiguousarray(row_coeffs, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ex = np.ascontiguousarray(phase_exps, dtype=np.int64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] tb = np.ascontiguousarray(table, dtype=np.complex128)
    cdef int R = rc.shape[0]
    cdef int T = rc.shape[1]
    cdef long grid = tb.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sums = np.zeros(R, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] bad = np.zeros(R, dtype=np.int64)
    # phase matrix split into real/imaginary planes, (T, grid) row-major
    cdef double* pre = <double*> malloc(T * grid * sizeof(double))
    cdef double* pim = <double*> malloc(T * grid * sizeof(double))
    cdef double* vr = <double*> malloc(grid * sizeof(double))
    cdef double* vi = <double*> malloc(grid * sizeof(double))
    cdef int r, t
    cdef long k, e, j
    cdef double a, b, s2, mod, acc
    cdef double* pr
    cdef double* pi_
    cdef long nbad
    try:
        with nogil:
            for t in range(T):
                e = ((ex[t] % grid) + grid) % grid
                j = 0
                for k in range(grid):
                    pre[t * grid + k] = tb[j].real
                    pim[t * grid + k] = tb[j].imag
                    j += e
                    if j >= grid:
                        j -= grid
            for r in range(R):
                for k in range(grid):
                    vr[k] = 0
                    vi[k] = 0
                for t in range(T):
                    a = rc[r, t].real
                    b = rc[r, t].imag
                    pr = pre + t * grid
                    pi_ = pim + t * grid
                    for k in range(grid):
                        vr[k] += a * pr[k] - b * pi_[k]
                        vi[k] += a * pi_[k] + b * pr[k]
                acc = 0
                nbad = 0
                for k in range(grid):
                    s2 = vr[k] * vr[k] + vi[k] * vi[k]
                    if s2 > 1e-280:
                        acc += 0.5 * log(s2)
                    else:
                        mod = cabs(vr[k] + 1j * vi[k])
                        if mod < TINY:
                            nbad += 1
                        else:
                            acc += log(mod)
                sums[r] = acc
                bad[r] = nbad
    finally:
        free(pre)
        free(pim)
        free(vr)
        free(vi)
    return sums, bad
