# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for cyclic tridiagonal matvecs and Thomas sweeps.

Mirrors ``_pykernels`` exactly; see that module for the array conventions.
"""
import numpy as np


def cyclic_matvec(const double[::1] lower, const double[::1] diag,
                  const double[::1] upper, const double[::1] v):
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t i
    out = np.empty(n)
    cdef double[::1] y = out
    if n == 1:
        y[0] = (lower[0] + diag[0] + upper[0]) * v[0]
        return out
    y[0] = lower[0] * v[n - 1] + diag[0] * v[0] + upper[0] * v[1]
    for i in range(1, n - 1):
        y[i] = lower[i] * v[i - 1] + diag[i] * v[i] + upper[i] * v[i + 1]
    y[n - 1] = lower[n - 1] * v[n - 2] + diag[n - 1] * v[n - 1] + upper[n - 1] * v[0]
    return out


def thomas_solve(const double[::1] lower, const double[::1] cp,
                 const double[::1] inv_den, const double[::1] rhs):
    cdef Py_ssize_t n = rhs.shape[0]
    cdef Py_ssize_t i
    out = np.empty(n)
    cdef double[::1] x = out
    if n == 0:
        return out
    x[0] = rhs[0] * inv_den[0]
    for i in range(1, n):
        x[i] = (rhs[i] - lower[i] * x[i - 1]) * inv_den[i]
    for i in range(n - 2, -1, -1):
        x[i] -= cp[i] * x[i + 1]
    return out
