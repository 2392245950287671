# cython: language_level=3
"""Compiled masked cost/gradient kernels.

Same contract as ``_numpy.py``: undirected masked pairs, upper triangle only.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def cost_only(
    double[:, ::1] p,
    long[::1] eq_u, long[::1] eq_v, double[::1] eq_d,
    long[::1] lb_u, long[::1] lb_v, double[::1] lb_d,
):
    cdef Py_ssize_t i, k
    cdef Py_ssize_t kdim = p.shape[1]
    cdef Py_ssize_t n_eq = eq_u.shape[0]
    cdef Py_ssize_t n_lb = lb_u.shape[0]
    cdef double c = 0.0, r, diff
    cdef Py_ssize_t u, v

    for i in range(n_eq):
        u = eq_u[i]
        v = eq_v[i]
        r = eq_d[i]
        for k in range(kdim):
            diff = p[u, k] - p[v, k]
            r -= diff * diff
        c += r * r
    for i in range(n_lb):
        u = lb_u[i]
        v = lb_v[i]
        r = lb_d[i]
        for k in range(kdim):
            diff = p[u, k] - p[v, k]
            r -= diff * diff
        if r > 0.0:
            c += r * r
    return c


def cost_and_grad(
    double[:, ::1] p,
    long[::1] eq_u, long[::1] eq_v, double[::1] eq_d,
    long[::1] lb_u, long[::1] lb_v, double[::1] lb_d,
):
    cdef Py_ssize_t i, k
    cdef Py_ssize_t kdim = p.shape[1]
    cdef Py_ssize_t n_eq = eq_u.shape[0]
    cdef Py_ssize_t n_lb = lb_u.shape[0]
    cdef double c = 0.0, r, diff, w
    cdef Py_ssize_t u, v

    grad_arr = np.zeros((p.shape[0], kdim), dtype=np.float64)
    cdef double[:, ::1] grad = grad_arr

    for i in range(n_eq):
        u = eq_u[i]
        v = eq_v[i]
        r = eq_d[i]
        for k in range(kdim):
            diff = p[u, k] - p[v, k]
            r -= diff * diff
        c += r * r
        w = -4.0 * r
        for k in range(kdim):
            diff = p[u, k] - p[v, k]
            grad[u, k] += w * diff
            grad[v, k] -= w * diff
    for i in range(n_lb):
        u = lb_u[i]
        v = lb_v[i]
        r = lb_d[i]
        for k in range(kdim):
            diff = p[u, k] - p[v, k]
            r -= diff * diff
        if r > 0.0:
            c += r * r
            w = -4.0 * r
            for k in range(kdim):
                diff = p[u, k] - p[v, k]
                grad[u, k] += w * diff
                grad[v, k] -= w * diff
    return c, grad_arr
