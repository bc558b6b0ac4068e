# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as :mod:`qdouble._core_py`."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin

from qdouble._core_py import _d_terms

cnp.import_array()


def twisted_product(H1, H2, conj, ldiv):
    cdef cnp.ndarray[cnp.complex128_t, ndim=3] A = np.ascontiguousarray(H1, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=3] Bm = np.ascontiguousarray(H2, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] C = np.ascontiguousarray(conj, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] L = np.ascontiguousarray(ldiv, dtype=np.int64)
    cdef Py_ssize_t nb = A.shape[0], N = A.shape[1]
    cdef cnp.ndarray[cnp.complex128_t, ndim=3] out = np.zeros((nb, N, N), dtype=np.complex128)
    cdef Py_ssize_t b, x, y, z, cx
    cdef double complex a
    cdef double inv = 1.0 / N
    for b in range(nb):
        for x in range(N):
            for z in range(N):
                a = A[b, x, z]
                if a.real == 0.0 and a.imag == 0.0:
                    continue
                a = a * inv
                cx = C[z, x]
                for y in range(N):
                    out[b, x, y] += a * Bm[b, cx, L[z, y]]
    return out


def wigner_d_table(int twoj, theta):
    cdef double[::1] th = np.ascontiguousarray(np.atleast_1d(np.asarray(theta, dtype=np.float64)).ravel())
    cdef Py_ssize_t T = th.shape[0], n = twoj + 1
    res = np.zeros((T, n, n))
    cdef double[:, :, ::1] out = res
    terms = _d_terms(twoj)
    cdef Py_ssize_t nt = len(terms), k, t, p
    cdef long[:, ::1] idx = np.array([[r[0], r[1], r[3], r[4]] for r in terms], dtype=np.int_).reshape(nt, 4)
    cdef double[::1] coef = np.array([r[2] for r in terms], dtype=np.float64)
    # powers of cos and sin up to 2j, reused by every term
    cdef double[::1] cp = np.empty(2 * twoj + 1), sp = np.empty(2 * twoj + 1)
    cdef double c, s
    for t in range(T):
        c = cos(0.5 * th[t])
        s = sin(0.5 * th[t])
        cp[0] = 1.0
        sp[0] = 1.0
        for p in range(1, 2 * twoj + 1):
            cp[p] = cp[p - 1] * c
            sp[p] = sp[p - 1] * s
        for k in range(nt):
            out[t, idx[k, 0], idx[k, 1]] += coef[k] * cp[idx[k, 2]] * sp[idx[k, 3]]
    return res
