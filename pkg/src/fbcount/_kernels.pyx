# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled versions of the grid seed scan and the arc-arc crossing test.

Same signatures and outputs as ``_kernels_py``.  The seed scan avoids the
full (n, m) temporaries of the numpy version.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport NAN, sqrt

cnp.import_array()


cdef inline double _f(const double[:, ::1] a, const double[:, ::1] b, Py_ssize_t i, Py_ssize_t j) noexcept nogil:
    cdef double c = a[i, 0] * b[j, 0] + a[i, 1] * b[j, 1] + a[i, 2] * b[j, 2]
    cdef double s = 1.0 - c * c
    return sqrt(s) if s > 0.0 else 0.0


def grid_seeds(a, b, sa, sb, double h, double factor, Py_ssize_t band, bint same):
    cdef const double[:, ::1] A = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[:, ::1] B = np.ascontiguousarray(b, dtype=np.float64)
    cdef const double[::1] SA = np.ascontiguousarray(sa, dtype=np.float64)
    cdef const double[::1] SB = np.ascontiguousarray(sb, dtype=np.float64)
    cdef Py_ssize_t n = A.shape[0], m = B.shape[0]
    cdef double[:, ::1] F = np.empty((n, m), dtype=np.float64)
    cdef Py_ssize_t i, j, di, dj, ii, jj, d
    cdef double v, thr
    cdef bint ok
    out = []
    with nogil:
        for i in range(n):
            for j in range(m):
                F[i, j] = _f(A, B, i, j)
    for i in range(n):
        for j in range(m):
            if same:
                if i >= j:
                    continue
                d = j - i
                if n - d < d:
                    d = n - d
                if d <= band:
                    continue
            v = F[i, j]
            thr = factor * h * sqrt(SA[i] * SA[i] + SB[j] * SB[j])
            if not v < thr:
                continue
            ok = True
            for di in range(-1, 2):
                ii = (i + di + n) % n
                for dj in range(-1, 2):
                    jj = (j + dj + m) % m
                    if F[ii, jj] < v:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out.append((i, j))
    if not out:
        return np.zeros((0, 2), dtype=np.int64)
    return np.asarray(out, dtype=np.int64)


def arc_pairs(P, Q, cand_i, cand_j):
    cdef const double[:, ::1] p = np.ascontiguousarray(P, dtype=np.float64)
    cdef const double[:, ::1] q = np.ascontiguousarray(Q, dtype=np.float64)
    cdef const cnp.int64_t[::1] ci = np.ascontiguousarray(cand_i, dtype=np.int64)
    cdef const cnp.int64_t[::1] cj = np.ascontiguousarray(cand_j, dtype=np.int64)
    cdef Py_ssize_t k, K = ci.shape[0], i, j, c
    mask_a = np.zeros(K, dtype=bool)
    u_a = np.empty(K, dtype=np.float64)
    v_a = np.empty(K, dtype=np.float64)
    cdef cnp.npy_bool[::1] mask = mask_a
    cdef double[::1] U = u_a
    cdef double[::1] V = v_a
    cdef double a0[3]
    cdef double a1[3]
    cdef double b0[3]
    cdef double b1[3]
    cdef double pn[3]
    cdef double qn[3]
    cdef double flip, sb0, sb1, sa0, sa1, dot
    with nogil:
        for k in range(K):
            i = ci[k]
            j = cj[k]
            dot = 0.0
            for c in range(3):
                a0[c] = p[i, c]
                a1[c] = p[i + 1, c]
                b0[c] = q[j, c]
                b1[c] = q[j + 1, c]
                dot = dot + (a0[c] + a1[c]) * (b0[c] + b1[c])
            flip = -1.0 if dot < 0 else 1.0
            for c in range(3):
                b0[c] = b0[c] * flip
                b1[c] = b1[c] * flip
            pn[0] = a0[1] * a1[2] - a0[2] * a1[1]
            pn[1] = a0[2] * a1[0] - a0[0] * a1[2]
            pn[2] = a0[0] * a1[1] - a0[1] * a1[0]
            qn[0] = b0[1] * b1[2] - b0[2] * b1[1]
            qn[1] = b0[2] * b1[0] - b0[0] * b1[2]
            qn[2] = b0[0] * b1[1] - b0[1] * b1[0]
            sb0 = b0[0] * pn[0] + b0[1] * pn[1] + b0[2] * pn[2]
            sb1 = b1[0] * pn[0] + b1[1] * pn[1] + b1[2] * pn[2]
            sa0 = a0[0] * qn[0] + a0[1] * qn[1] + a0[2] * qn[2]
            sa1 = a1[0] * qn[0] + a1[1] * qn[1] + a1[2] * qn[2]
            mask[k] = (sb0 * sb1 < 0) and (sa0 * sa1 < 0)
            U[k] = sa0 / (sa0 - sa1) if sa0 != sa1 else NAN
            V[k] = sb0 / (sb0 - sb1) if sb0 != sb1 else NAN
    return mask_a, u_a, v_a
