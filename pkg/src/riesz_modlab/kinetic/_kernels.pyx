# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled phase-space kernels; see _kernels_py for the reference semantics."""

import numpy as np

cimport numpy as cnp
from libc.math cimport floor

cnp.import_array()


def advect_x(double[:, ::1] f, double[:] shifts):
    cdef Py_ssize_t n = f.shape[0]
    cdef Py_ssize_t m = f.shape[1]
    cdef cnp.ndarray[double, ndim=2] out_arr = np.empty((n, m))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, il, ir, ip, im
    cdef double s, theta, fl, fr, sl, sr
    cdef long q
    for j in range(m):
        s = shifts[j]
        q = <long>s
        if s < 0 and s != q:
            q -= 1
        theta = s - q
        for i in range(n):
            ir = (i - q) % n
            if ir < 0:
                ir += n
            il = ir - 1
            if il < 0:
                il += n
            ip = il + 1 if il + 1 < n else 0
            im = il - 1 if il > 0 else n - 1
            sl = 0.5 * (f[ip, j] - f[im, j])
            fl = f[il, j]
            ip = ir + 1 if ir + 1 < n else 0
            im = ir - 1 if ir > 0 else n - 1
            sr = 0.5 * (f[ip, j] - f[im, j])
            fr = f[ir, j]
            out[i, j] = theta * (fl + sl * (1.0 - theta) / 2.0) \
                + (1.0 - theta) * (fr - sr * theta / 2.0)
    return out_arr


def deposit_affine(double[:, ::1] f, double a, double[:] b, double v0, double dv):
    cdef Py_ssize_t nx = f.shape[0]
    cdef Py_ssize_t nv = f.shape[1]
    cdef cnp.ndarray[double, ndim=2] out_arr = np.zeros((nx, nv))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, k
    cdef long c, col
    cdef double y, p, d, val, loss = 0.0
    cdef double w0, w1, w2
    for i in range(nx):
        for j in range(nv):
            val = f[i, j]
            if val == 0.0:
                continue
            y = a * (v0 + dv * j) + b[i]
            p = (y - v0) / dv
            c = <long>floor(p + 0.5)
            d = p - c
            w0 = 0.5 * (d * d - d)
            w1 = 1.0 - d * d
            w2 = 0.5 * (d * d + d)
            col = c - 1
            if 0 <= col < nv:
                out[i, col] += w0 * val
            else:
                loss += w0 * val
            col = c
            if 0 <= col < nv:
                out[i, col] += w1 * val
            else:
                loss += w1 * val
            col = c + 1
            if 0 <= col < nv:
                out[i, col] += w2 * val
            else:
                loss += w2 * val
    return out_arr, loss


def blur_v(double[:, ::1] f, double[:] weights):
    cdef Py_ssize_t nx = f.shape[0]
    cdef Py_ssize_t nv = f.shape[1]
    cdef Py_ssize_t nw = weights.shape[0]
    cdef long half = (nw - 1) // 2
    cdef cnp.ndarray[double, ndim=2] out_arr = np.zeros((nx, nv))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, k
    cdef long col
    cdef double val, loss = 0.0
    for i in range(nx):
        for j in range(nv):
            val = f[i, j]
            if val == 0.0:
                continue
            for k in range(nw):
                col = j + k - half
                if 0 <= col < nv:
                    out[i, col] += weights[k] * val
                else:
                    loss += weights[k] * val
    return out_arr, loss
