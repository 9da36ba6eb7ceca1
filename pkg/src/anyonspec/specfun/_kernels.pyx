# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the fractional-order special functions.

Algorithmic twin of ``_kernels_py``; see that module for the regime
layout and the error-bound conventions.  Kept free of Python object
traffic in the inner loops so quadrature rules can evaluate K_nu on
thousands of nodes cheaply.
"""

from libc.math cimport (acosh, cosh, exp, fabs, log, sin, sqrt, M_PI, INFINITY)

import numpy as np

REGIME_SERIES = 0
REGIME_QUADRATURE = 1
REGIME_ASYMPTOTIC = 2
REGIME_CLOSED_FORM = 3

cdef double _X_SERIES_MAX = 2.0
cdef double _X_ASYM_MIN = 14.0
cdef double _TRAP_H = M_PI * M_PI / 50.0
cdef double _LOG_TINY = -744.0

cdef double _LANCZOS_G = 7.0
cdef double[9] _LANCZOS
_LANCZOS[0] = 0.99999999999980993
_LANCZOS[1] = 676.5203681218851
_LANCZOS[2] = -1259.1392167224028
_LANCZOS[3] = 771.32342877765313
_LANCZOS[4] = -176.61502916214059
_LANCZOS[5] = 12.507343278686905
_LANCZOS[6] = -0.13857109526572012
_LANCZOS[7] = 9.9843695780195716e-6
_LANCZOS[8] = 1.5056327351493116e-7


cdef double _gamma_pos(double x) except -1.0:
    cdef double z, acc, t
    cdef int i
    if x <= 0.0:
        raise ValueError(f"gamma_pos requires x > 0, got {x}")
    if x < 0.5:
        return _gamma_pos(x + 1.0) / x
    z = x - 1.0
    acc = _LANCZOS[0]
    for i in range(1, 9):
        acc += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return sqrt(2.0 * M_PI) * t ** (z + 0.5) * exp(-t) * acc


def gamma_pos(double x):
    """Gamma(x) for x > 0 via the Lanczos approximation."""
    return _gamma_pos(x)


cdef double _besseli(double nu, double x):
    cdef double half, term, total, q
    cdef int m
    if x == 0.0:
        if nu > 0.0:
            return 0.0
        return 1.0 if nu == 0.0 else INFINITY
    half = 0.5 * x
    term = exp(nu * log(half)) / _gamma_pos(nu + 1.0)
    total = term
    q = half * half
    m = 0
    while m < 500:
        m += 1
        term *= q / (m * (m + nu))
        total += term
        if term < 1e-18 * total:
            break
    return total


def besseli(double nu, double x):
    """I_nu(x) by the ascending series; nu > -1, moderate x."""
    return _besseli(nu, x)


cdef (double, double) _besselk_series(double nu, double x):
    cdef double half, q, log_half, ap, am, total, absum, pref, value, err
    cdef int m
    half = 0.5 * x
    q = half * half
    log_half = log(half)
    ap = exp(nu * log_half) / _gamma_pos(1.0 + nu)
    am = exp(-nu * log_half) / _gamma_pos(1.0 - nu)
    total = am - ap
    absum = am + ap
    m = 0
    while m < 400:
        m += 1
        ap *= q / (m * (m + nu))
        am *= q / (m * (m - nu))
        total += am - ap
        absum += am + ap
        if am + ap < 1e-18 * fabs(total):
            break
    pref = M_PI / (2.0 * sin(M_PI * nu))
    value = pref * total
    err = fabs(pref) * (absum * 5e-16 * (m + 1.0) + 2.0 * (ap + am))
    return value, err + 2e-16 * fabs(value)


cdef double _trap(double nu, double x, double T, double h):
    cdef double total, t
    cdef int j, n
    n = <int>(T / h) + 1
    total = 0.5 * exp(-x)
    for j in range(1, n + 1):
        t = j * h
        total += exp(-x * cosh(t)) * cosh(nu * t)
    return h * total


cdef (double, double) _besselk_quadrature(double nu, double x):
    cdef double T, v1, v2, err
    T = acosh(1.0 + 40.0 / x)
    v1 = _trap(nu, x, T, _TRAP_H)
    v2 = _trap(nu, x, T, 0.5 * _TRAP_H)
    err = fabs(v2 - v1)
    if err < 4e-16 * fabs(v2):
        err = 4e-16 * fabs(v2)
    return v2, err


cdef (double, double) _besselk_asymptotic(double nu, double x):
    cdef double mu, total, term, smallest, log_pref, pref, value, err
    cdef int k
    mu = 4.0 * nu * nu
    total = 1.0
    term = 1.0
    smallest = 1.0
    k = 0
    while k < 60:
        k += 1
        term *= (mu - (2.0 * k - 1.0) ** 2) / (8.0 * k * x)
        if fabs(term) >= fabs(smallest):
            break
        total += term
        smallest = term
        if fabs(term) < 1e-17 * fabs(total):
            break
    log_pref = 0.5 * log(0.5 * M_PI / x) - x
    if log_pref < _LOG_TINY:
        return 0.0, exp(_LOG_TINY)
    pref = exp(log_pref)
    value = pref * total
    err = pref * (fabs(smallest) + 1e-16 * fabs(total) * (k + 1.0))
    return value, err


cdef (double, double, int) _besselk_eval(double nu, double x) except *:
    cdef double v, e
    if x <= 0.0:
        raise ValueError(f"besselk requires x > 0, got {x}")
    if x <= _X_SERIES_MAX:
        v, e = _besselk_series(nu, x)
        return v, e, REGIME_SERIES
    if x < _X_ASYM_MIN:
        v, e = _besselk_quadrature(nu, x)
        return v, e, REGIME_QUADRATURE
    v, e = _besselk_asymptotic(nu, x)
    return v, e, REGIME_ASYMPTOTIC


def besselk_eval(double nu, double x):
    """K_nu(x) for nu in (0, 1); returns (value, abs_error_bound, regime)."""
    cdef double v, e
    cdef int r
    v, e, r = _besselk_eval(nu, x)
    return v, e, r


def besselk_many(double nu, xs):
    """Vectorized K_nu values (no error bounds) for a positive array."""
    cdef double v, e
    cdef int r
    cdef Py_ssize_t i, n
    flat = np.ascontiguousarray(xs, dtype=np.float64).ravel()
    out = np.empty_like(flat)
    cdef double[::1] fv = flat
    cdef double[::1] ov = out
    n = fv.shape[0]
    for i in range(n):
        v, e, r = _besselk_eval(nu, fv[i])
        ov[i] = v
    return out.reshape(np.shape(xs))
