# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels.

Mirrors the calling convention of ``_kernels_py`` (the reference
semantics); selected at import time by :mod:`odeco.kernels`.  Contractions
run as sequential C loops over the raveled entries in index order.
"""

import numpy as np

from libc.math cimport fabs, sqrt

__all__ = ["apply_full", "apply_partial", "project_sphere_slabs", "ascent_step"]


cdef void _contract_once(const double* src, double* dst, Py_ssize_t rows,
                         Py_ssize_t n, const double* x) noexcept nogil:
    # dst may alias the front of src: each dst[t] is written only after
    # the row src[t*n : (t+1)*n] has been fully read, and t <= t*n.
    cdef Py_ssize_t t, i
    cdef double acc
    for t in range(rows):
        acc = 0.0
        for i in range(n):
            acc += src[t * n + i] * x[i]
        dst[t] = acc


cdef double _norm(const double* v, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    cdef double acc = 0.0
    for i in range(n):
        acc += v[i] * v[i]
    return sqrt(acc)


def apply_full(const double[::1] data, const double[::1] x, int p):
    """Contract the tensor against ``x`` on all ``p`` axes; returns float."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t rows = 1
    cdef int k
    for k in range(p - 1):
        rows *= n
    buf = np.empty(rows, dtype=np.float64)
    cdef double[::1] bv = buf
    with nogil:
        _contract_once(&data[0], &bv[0], rows, n, &x[0])
        for k in range(p - 1):
            rows //= n
            _contract_once(&bv[0], &bv[0], rows, n, &x[0])
    return float(bv[0])


def apply_partial(const double[::1] data, const double[::1] x, int p):
    """Contract the tensor against ``x`` on all axes but the first."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t rows = 1
    cdef int k
    for k in range(p - 1):
        rows *= n
    buf = np.empty(rows, dtype=np.float64)
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] bv = buf
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        _contract_once(&data[0], &bv[0], rows, n, &x[0])
        for k in range(p - 2):
            rows //= n
            _contract_once(&bv[0], &bv[0], rows, n, &x[0])
        for i in range(n):
            ov[i] = bv[i]
    return out


cdef int _project(double* v, Py_ssize_t n, const double[:, ::1] anchors,
                  double theta, int max_passes, double slack,
                  double* coef) noexcept nogil:
    """Project v in place onto the unit sphere intersected with the anchor
    slabs. Returns 1 on success, 0 on failure. ``coef`` is scratch of
    length anchors.shape[0].  Clipping is simultaneous (all overlaps
    measured before any update), matching the NumPy backend."""
    cdef Py_ssize_t k = anchors.shape[0]
    cdef Py_ssize_t i, j, pas
    cdef double c, nv, worst, s
    if k == 0:
        nv = _norm(v, n)
        if nv < 1e-300:
            return 0
        for i in range(n):
            v[i] /= nv
        return 1
    for pas in range(max_passes):
        for j in range(k):
            c = 0.0
            for i in range(n):
                c += anchors[j, i] * v[i]
            coef[j] = c
        for j in range(k):
            c = coef[j]
            if fabs(c) > theta:
                s = theta if c > 0 else -theta
                for i in range(n):
                    v[i] -= anchors[j, i] * (c - s)
        nv = _norm(v, n)
        if nv < 1e-15:
            return 0
        for i in range(n):
            v[i] /= nv
        worst = 0.0
        for j in range(k):
            c = 0.0
            for i in range(n):
                c += anchors[j, i] * v[i]
            if fabs(c) > worst:
                worst = fabs(c)
        if worst <= theta + slack:
            return 1
    return 0


def project_sphere_slabs(const double[::1] y, const double[:, ::1] anchors,
                         double theta, int max_passes=100, double slack=1e-12):
    """Project ``y`` onto the unit sphere intersected with the slabs
    ``|<v, anchors[i]>| <= theta``; returns ``(vector, ok)``."""
    cdef Py_ssize_t n = y.shape[0]
    v_arr = np.array(y, dtype=np.float64)
    cdef double[::1] v = v_arr
    coef_arr = np.empty(max(anchors.shape[0], 1), dtype=np.float64)
    cdef double[::1] coef = coef_arr
    cdef int ok
    with nogil:
        ok = _project(&v[0], n, anchors, theta, max_passes, slack, &coef[0])
    return v_arr, bool(ok)


def ascent_step(const double[::1] data, const double[::1] x,
                const double[::1] g, double alpha, int p,
                const double[:, ::1] anchors, double theta,
                int max_passes=100, double slack=1e-12):
    """One shifted power step ``x + g/alpha`` followed by feasibility
    projection; returns ``(v, g_v, f_v, ok)``."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t rows = 1
    cdef Py_ssize_t i
    cdef int k, ok
    cdef double fv
    for k in range(p - 1):
        rows *= n
    v_arr = np.empty(n, dtype=np.float64)
    gv_arr = np.empty(n, dtype=np.float64)
    buf = np.empty(rows, dtype=np.float64)
    coef_arr = np.empty(max(anchors.shape[0], 1), dtype=np.float64)
    cdef double[::1] v = v_arr
    cdef double[::1] gv = gv_arr
    cdef double[::1] bv = buf
    cdef double[::1] coef = coef_arr
    with nogil:
        for i in range(n):
            v[i] = x[i] + g[i] / alpha
        ok = _project(&v[0], n, anchors, theta, max_passes, slack, &coef[0])
        fv = 0.0
        if ok:
            _contract_once(&data[0], &bv[0], rows, n, &v[0])
            for k in range(p - 2):
                rows //= n
                _contract_once(&bv[0], &bv[0], rows, n, &v[0])
            for i in range(n):
                gv[i] = bv[i]
                fv += bv[i] * v[i]
    if not ok:
        return v_arr, gv_arr, 0.0, False
    return v_arr, gv_arr, fv, True
