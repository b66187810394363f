# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled leapfrog step kernels.

Each kernel advances one time level of

    (1 + had) * u_next = (2*u - u_prev) + q*lap(u) + had*u_prev

where ``q = (dt/h)^2`` and ``had = a*dt/2`` is the pointwise implicit
damping weight.  The arithmetic grouping matches
``wavelab.kernels.reference`` exactly so both backends agree to the ulp
(the extension is built with -ffp-contract=off).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def step_periodic_1d(double[::1] u_prev, double[::1] u_curr, double[::1] out,
                     double q, double[::1] had):
    cdef Py_ssize_t n = u_curr.shape[0]
    cdef Py_ssize_t i, l, r
    cdef double lap
    for i in range(n):
        l = i - 1 if i > 0 else n - 1
        r = i + 1 if i < n - 1 else 0
        lap = (u_curr[l] + u_curr[r]) - 2.0 * u_curr[i]
        out[i] = ((2.0 * u_curr[i] - u_prev[i]) + q * lap + had[i] * u_prev[i]) \
            / (1.0 + had[i])


def step_box_1d(double[::1] u_prev, double[::1] u_curr, double[::1] out,
                double q, double[::1] had):
    cdef Py_ssize_t n = u_curr.shape[0]
    cdef Py_ssize_t i
    cdef double lap, left, right
    for i in range(n):
        left = u_curr[i - 1] if i > 0 else 0.0
        right = u_curr[i + 1] if i < n - 1 else 0.0
        lap = (left + right) - 2.0 * u_curr[i]
        out[i] = ((2.0 * u_curr[i] - u_prev[i]) + q * lap + had[i] * u_prev[i]) \
            / (1.0 + had[i])


def step_radial_1d(double[::1] u_prev, double[::1] u_curr, double[::1] out,
                   double q, double[::1] had):
    # interior update only; both endpoints stay pinned at zero
    cdef Py_ssize_t n = u_curr.shape[0]
    cdef Py_ssize_t i
    cdef double lap
    out[0] = 0.0
    out[n - 1] = 0.0
    for i in range(1, n - 1):
        lap = (u_curr[i - 1] + u_curr[i + 1]) - 2.0 * u_curr[i]
        out[i] = ((2.0 * u_curr[i] - u_prev[i]) + q * lap + had[i] * u_prev[i]) \
            / (1.0 + had[i])


def step_periodic_2d(double[:, ::1] u_prev, double[:, ::1] u_curr,
                     double[:, ::1] out, double q, double[:, ::1] had):
    cdef Py_ssize_t n0 = u_curr.shape[0], n1 = u_curr.shape[1]
    cdef Py_ssize_t i, j, im, ip, jm, jp
    cdef double lap
    for i in range(n0):
        im = i - 1 if i > 0 else n0 - 1
        ip = i + 1 if i < n0 - 1 else 0
        for j in range(n1):
            jm = j - 1 if j > 0 else n1 - 1
            jp = j + 1 if j < n1 - 1 else 0
            lap = ((u_curr[im, j] + u_curr[ip, j]) - 2.0 * u_curr[i, j]) \
                + ((u_curr[i, jm] + u_curr[i, jp]) - 2.0 * u_curr[i, j])
            out[i, j] = ((2.0 * u_curr[i, j] - u_prev[i, j]) + q * lap
                         + had[i, j] * u_prev[i, j]) / (1.0 + had[i, j])


def step_box_2d(double[:, ::1] u_prev, double[:, ::1] u_curr,
                double[:, ::1] out, double q, double[:, ::1] had):
    cdef Py_ssize_t n0 = u_curr.shape[0], n1 = u_curr.shape[1]
    cdef Py_ssize_t i, j
    cdef double lap, a0, a1
    for i in range(n0):
        for j in range(n1):
            a0 = (u_curr[i - 1, j] if i > 0 else 0.0) \
                + (u_curr[i + 1, j] if i < n0 - 1 else 0.0)
            a1 = (u_curr[i, j - 1] if j > 0 else 0.0) \
                + (u_curr[i, j + 1] if j < n1 - 1 else 0.0)
            lap = (a0 - 2.0 * u_curr[i, j]) + (a1 - 2.0 * u_curr[i, j])
            out[i, j] = ((2.0 * u_curr[i, j] - u_prev[i, j]) + q * lap
                         + had[i, j] * u_prev[i, j]) / (1.0 + had[i, j])


def step_periodic_3d(double[:, :, ::1] u_prev, double[:, :, ::1] u_curr,
                     double[:, :, ::1] out, double q, double[:, :, ::1] had):
    cdef Py_ssize_t n0 = u_curr.shape[0], n1 = u_curr.shape[1], n2 = u_curr.shape[2]
    cdef Py_ssize_t i, j, k, im, ip, jm, jp, km, kp
    cdef double lap
    for i in range(n0):
        im = i - 1 if i > 0 else n0 - 1
        ip = i + 1 if i < n0 - 1 else 0
        for j in range(n1):
            jm = j - 1 if j > 0 else n1 - 1
            jp = j + 1 if j < n1 - 1 else 0
            for k in range(n2):
                km = k - 1 if k > 0 else n2 - 1
                kp = k + 1 if k < n2 - 1 else 0
                lap = ((u_curr[im, j, k] + u_curr[ip, j, k]) - 2.0 * u_curr[i, j, k]) \
                    + ((u_curr[i, jm, k] + u_curr[i, jp, k]) - 2.0 * u_curr[i, j, k]) \
                    + ((u_curr[i, j, km] + u_curr[i, j, kp]) - 2.0 * u_curr[i, j, k])
                out[i, j, k] = ((2.0 * u_curr[i, j, k] - u_prev[i, j, k]) + q * lap
                                + had[i, j, k] * u_prev[i, j, k]) / (1.0 + had[i, j, k])


def step_box_3d(double[:, :, ::1] u_prev, double[:, :, ::1] u_curr,
                double[:, :, ::1] out, double q, double[:, :, ::1] had):
    cdef Py_ssize_t n0 = u_curr.shape[0], n1 = u_curr.shape[1], n2 = u_curr.shape[2]
    cdef Py_ssize_t i, j, k
    cdef double lap, a0, a1, a2
    for i in range(n0):
        for j in range(n1):
            for k in range(n2):
                a0 = (u_curr[i - 1, j, k] if i > 0 else 0.0) \
                    + (u_curr[i + 1, j, k] if i < n0 - 1 else 0.0)
                a1 = (u_curr[i, j - 1, k] if j > 0 else 0.0) \
                    + (u_curr[i, j + 1, k] if j < n1 - 1 else 0.0)
                a2 = (u_curr[i, j, k - 1] if k > 0 else 0.0) \
                    + (u_curr[i, j, k + 1] if k < n2 - 1 else 0.0)
                lap = ((a0 - 2.0 * u_curr[i, j, k]) + (a1 - 2.0 * u_curr[i, j, k])) \
                    + (a2 - 2.0 * u_curr[i, j, k])
                out[i, j, k] = ((2.0 * u_curr[i, j, k] - u_prev[i, j, k]) + q * lap
                                + had[i, j, k] * u_prev[i, j, k]) / (1.0 + had[i, j, k])
