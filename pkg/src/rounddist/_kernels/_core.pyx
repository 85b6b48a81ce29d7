# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: array round-to-nearest, piecewise Chebyshev evaluation
and the error-density enumeration sum.  Mirrors ``_pure``."""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, frexp, ldexp, rint

cnp.import_array()

IMPL = "compiled"


def round_nearest_array(x, int p, int e_min, int e_max):
    arr = np.asarray(x, dtype=np.float64)
    shape = arr.shape
    cdef double[::1] xv = np.ascontiguousarray(arr.ravel())
    cdef Py_ssize_t n = xv.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double top = ldexp(2.0 - ldexp(1.0, -p), e_max)
    cdef double half_min = ldexp(1.0, e_min - 1)
    cdef double twop = <double>(1 << p)
    cdef double a, sgn, scaled, kf, k
    cdef int e2, e
    cdef Py_ssize_t i
    for i in range(n):
        a = xv[i]
        sgn = 1.0
        if a < 0.0:
            sgn = -1.0
            a = -a
        if a <= half_min:
            out[i] = 0.0
            continue
        if a > top:
            out[i] = sgn * float("inf")
            continue
        frexp(a, &e2)
        e = e2 - 1
        if e < e_min:
            out[i] = sgn * ldexp(1.0, e_min)
            continue
        scaled = ldexp(a, -e)
        kf = (scaled - 1.0) * twop
        k = rint(kf)  # FE_TONEAREST: ties to even
        if k == twop:
            k = 0.0
            e += 1
        # a <= top guarantees e <= e_max here
        out[i] = sgn * ldexp(1.0 + k / twop, e)
    return out_arr.reshape(shape)


cdef inline Py_ssize_t _find_piece(const double[::1] breaks, Py_ssize_t n_pieces, double x) nogil:
    cdef Py_ssize_t lo = 0, hi = n_pieces, mid
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if x < breaks[mid]:
            hi = mid
        else:
            lo = mid
    return lo


cdef inline double _cheb_clenshaw(const double[:, ::1] cf, Py_ssize_t piece, Py_ssize_t dmax, double s) nogil:
    cdef double b0, b1 = 0.0, b2 = 0.0
    cdef Py_ssize_t d
    for d in range(dmax - 1, 0, -1):
        b0 = cf[piece, d] + 2.0 * s * b1 - b2
        b2 = b1
        b1 = b0
    return cf[piece, 0] + s * b1 - b2


def piecewise_cheb_eval(x, breaks, coefs):
    arr = np.asarray(x, dtype=np.float64)
    shape = arr.shape
    cdef double[::1] xv = np.ascontiguousarray(arr.ravel())
    cdef double[::1] br = np.ascontiguousarray(breaks, dtype=np.float64)
    cdef double[:, ::1] cf = np.ascontiguousarray(coefs, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], n_pieces = cf.shape[0], dmax = cf.shape[1]
    out_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double lo = br[0], hi = br[n_pieces]
    cdef double xi, a, b, s
    cdef Py_ssize_t i, piece
    for i in range(n):
        xi = xv[i]
        if xi < lo or xi > hi:
            continue
        piece = _find_piece(br, n_pieces, xi)
        a = br[piece]
        b = br[piece + 1]
        s = (2.0 * xi - (a + b)) / (b - a)
        out[i] = _cheb_clenshaw(cf, piece, dmax, s)
    return out_arr.reshape(shape)


def error_density_sum(t_nodes, z_vals, double u, breaks, coefs):
    cdef double[::1] t = np.ascontiguousarray(t_nodes, dtype=np.float64)
    cdef double[::1] z = np.ascontiguousarray(z_vals, dtype=np.float64)
    cdef double[::1] br = np.ascontiguousarray(breaks, dtype=np.float64)
    cdef double[:, ::1] cf = np.ascontiguousarray(coefs, dtype=np.float64)
    cdef Py_ssize_t nt = t.shape[0], nz = z.shape[0]
    cdef Py_ssize_t n_pieces = cf.shape[0], dmax = cf.shape[1]
    out_arr = np.empty(nt, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double lo = br[0], hi = br[n_pieces]
    cdef double denom, pt, s, acc, a, b
    cdef Py_ssize_t i, j, piece
    with nogil:
        for i in range(nt):
            denom = 1.0 - t[i] * u
            acc = 0.0
            for j in range(nz):
                pt = z[j] / denom
                if pt < lo or pt > hi:
                    continue
                piece = _find_piece(br, n_pieces, pt)
                a = br[piece]
                b = br[piece + 1]
                s = (2.0 * pt - (a + b)) / (b - a)
                acc += _cheb_clenshaw(cf, piece, dmax, s) * fabs(z[j])
            out[i] = acc * u / (denom * denom)
    return out_arr
