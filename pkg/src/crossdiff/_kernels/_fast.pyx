# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-mode symbol kernels.

Semantics must stay in lockstep with ``crossdiff._kernels._ref``; the pure
NumPy module is the reference and the test suite cross-checks the two.
"""

from libc.math cimport cos, exp, expm1, pow, sin

import numpy as np


cdef inline void _entries(double a, double q, double r, double d12, double d21,
                          int branch, double m,
                          double *k11, double *k12, double *k21, double *k22) noexcept nogil:
    cdef double decay_slow, decay_fast, decay, cosh_term, sinh_over_m, half_r
    if branch > 0:
        decay_slow = exp(-a * (0.5 * q - m))
        decay_fast = exp(-a * (0.5 * q + m))
        cosh_term = 0.5 * (decay_slow + decay_fast)
        sinh_over_m = -0.5 * decay_slow * expm1(-2.0 * a * m) / m
    elif branch < 0:
        decay = exp(-0.5 * a * q)
        cosh_term = decay * cos(a * m)
        sinh_over_m = decay * sin(a * m) / m
    else:
        decay = exp(-0.5 * a * q)
        cosh_term = decay
        sinh_over_m = decay * a
    half_r = 0.5 * r * sinh_over_m
    k11[0] = cosh_term + half_r
    k12[0] = -d12 * sinh_over_m
    k21[0] = -d21 * sinh_over_m
    k22[0] = cosh_term - half_r


cdef inline double _power_arg(double xi, double p, bint squared) noexcept nogil:
    # p == 2 dominates in practice; xi*xi equals pow(xi, 2) bit for bit
    if squared:
        return xi * xi
    return pow(xi, p)


def symbol_fields(const double[::1] xi, double p, double t, double q, double r,
                  double d12, double d21, int branch, double m):
    """Entry arrays (k11, k12, k21, k22) of exp(-t*xi**p * d) over a |xi| array."""
    cdef Py_ssize_t n = xi.shape[0]
    k11 = np.empty(n)
    k12 = np.empty(n)
    k21 = np.empty(n)
    k22 = np.empty(n)
    cdef double[::1] o11 = k11
    cdef double[::1] o12 = k12
    cdef double[::1] o21 = k21
    cdef double[::1] o22 = k22
    cdef Py_ssize_t i
    cdef bint squared = p == 2.0
    cdef double e11, e12, e21, e22
    for i in range(n):
        _entries(t * _power_arg(xi[i], p, squared), q, r, d12, d21, branch, m,
                 &e11, &e12, &e21, &e22)
        o11[i] = e11
        o12[i] = e12
        o21[i] = e21
        o22[i] = e22
    return k11, k12, k21, k22


def apply_symbol(const double complex[::1] uhat, const double complex[::1] vhat,
                 const double[::1] xi, double p, double t, double q, double r,
                 double d12, double d21, int branch, double m):
    """Multiply a transformed component pair by the symbol, mode by mode."""
    cdef Py_ssize_t n = xi.shape[0]
    if uhat.shape[0] != n or vhat.shape[0] != n:
        raise ValueError("uhat, vhat and xi must have matching lengths")
    out_u = np.empty(n, dtype=np.complex128)
    out_v = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] ou = out_u
    cdef double complex[::1] ov = out_v
    cdef Py_ssize_t i
    cdef bint squared = p == 2.0
    cdef double e11, e12, e21, e22
    for i in range(n):
        _entries(t * _power_arg(xi[i], p, squared), q, r, d12, d21, branch, m,
                 &e11, &e12, &e21, &e22)
        ou[i] = e11 * uhat[i] + e12 * vhat[i]
        ov[i] = e21 * uhat[i] + e22 * vhat[i]
    return out_u, out_v
