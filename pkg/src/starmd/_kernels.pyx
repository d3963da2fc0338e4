# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: p-norm evaluation and the norm-power gradient map.

Semantics must match ``_kernels_py`` exactly; both are exercised by the
test suite and compared by ``benchmarks/bench_kernels.py``.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, pow, sqrt

BACKEND = "compiled"


def pnorm(double[::1] x, double p):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double m = 0.0, acc = 0.0, a
    if p == 2.0:
        for i in range(n):
            acc += x[i] * x[i]
        return sqrt(acc)
    for i in range(n):
        a = fabs(x[i])
        if a > m:
            m = a
    if m == 0.0:
        return 0.0
    for i in range(n):
        acc += pow(fabs(x[i]) / m, p)
    return m * pow(acc, 1.0 / p)


def pnorm_power_map(double[::1] x, double p, double s, double[::1] out):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double m = 0.0, acc = 0.0, a, nrm, n_ratio, scale, r
    if p == 2.0:
        for i in range(n):
            acc += x[i] * x[i]
        nrm = sqrt(acc)
        if nrm == 0.0:
            for i in range(n):
                out[i] = 0.0
        elif s == 2.0:
            for i in range(n):
                out[i] = x[i]
        else:
            scale = pow(nrm, s - 2.0)
            for i in range(n):
                out[i] = x[i] * scale
        return nrm
    for i in range(n):
        a = fabs(x[i])
        if a > m:
            m = a
    if m == 0.0:
        for i in range(n):
            out[i] = 0.0
        return 0.0
    for i in range(n):
        acc += pow(fabs(x[i]) / m, p)
    n_ratio = pow(acc, 1.0 / p)
    scale = pow(n_ratio, s - p) * pow(m, s - 1.0)
    for i in range(n):
        r = pow(fabs(x[i]) / m, p - 1.0) * scale
        out[i] = r if x[i] > 0.0 else (-r if x[i] < 0.0 else 0.0)
    return m * n_ratio
