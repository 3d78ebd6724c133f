# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops in :mod:`mlqi._pykernels`."""

import numpy as np

from libc.math cimport ceil, exp, fabs, floor, M_PI, sqrt

name = "cython"

cdef double TWO_PI_SQ = 2.0 * M_PI * M_PI
cdef double INV_SQRT_2PI = 1.0 / sqrt(2.0 * M_PI)


def spectral_scatter(freqs, coeffs, long long n, double t_max, double eta, double[::1] out):
    cdef const long long[::1] fr = np.ascontiguousarray(freqs, dtype=np.int64)
    cdef const double[::1] cf = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef Py_ssize_t i, size = out.shape[0]
    cdef long long m, k, kmin, kmax, shifted, idx
    cdef double t, w, v, spilled = 0.0
    for i in range(fr.shape[0]):
        m = fr[i]
        kmin = <long long>ceil(-(<double>m) / n - t_max)
        kmax = <long long>floor(-(<double>m) / n + t_max)
        for k in range(kmin, kmax + 1):
            shifted = m + n * k
            t = (<double>shifted) / n
            if fabs(t) > t_max:
                continue
            w = exp(-TWO_PI_SQ * t * t)
            if not w > eta:
                continue
            v = cf[i] * w
            idx = shifted if shifted >= 0 else -shifted
            if idx < size:
                out[idx] += v
            else:
                spilled += fabs(v)
    return spilled


def window_sum(values, u, double radius):
    cdef const double[::1] vals = np.ascontiguousarray(values, dtype=np.float64)
    cdef const double[::1] uu = np.ascontiguousarray(np.atleast_1d(u), dtype=np.float64)
    cdef Py_ssize_t i, npts = uu.shape[0]
    cdef long long n = vals.shape[0], ell, lo, hi, r
    cdef double d, acc
    res = np.empty(npts, dtype=np.float64)
    cdef double[::1] out = res
    for i in range(npts):
        lo = <long long>ceil(uu[i] - radius)
        hi = <long long>floor(uu[i] + radius)
        acc = 0.0
        for ell in range(lo, hi + 1):
            d = uu[i] - ell
            r = ell % n
            if r < 0:
                r += n
            acc += vals[r] * INV_SQRT_2PI * exp(-0.5 * d * d)
        out[i] = acc
    return res
