# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
# cython: language_level=3
"""Compiled eigensolver kernel.

Identical algorithm to _pyeigen (Cholesky, triangular reduction, Householder
tridiagonalization with transposed accumulation, implicit-shift QL), written as
C loop nests over C-contiguous memoryviews. Heavy phases run without the GIL so
independent solves can proceed concurrently from worker threads.

Layout choice: eigenvectors live in the ROWS of the accumulation matrix, so QL
plane rotations and back-substitution stream over contiguous memory.
"""

import numpy as np

cimport cython
from libc.math cimport copysign, fabs, hypot, sqrt

BACKEND = "cython"

cdef double _EPS = 2.220446049250313e-16  # IEEE double unit roundoff


cdef Py_ssize_t _chol(const double[:, ::1] b, double[:, ::1] l, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j, k
    cdef double s
    for k in range(n):
        s = b[k, k]
        for j in range(k):
            s -= l[k, j] * l[k, j]
        if not s > 0.0:
            return k
        l[k, k] = sqrt(s)
        for i in range(k + 1, n):
            s = b[i, k]
            for j in range(k):
                s -= l[i, j] * l[k, j]
            l[i, k] = s / l[k, k]
    return -1


def cholesky_lower(b):
    """Lower Cholesky factor of symmetric positive definite b (b = L L^T)."""
    b = np.array(b, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = b.shape[0]
    l_arr = np.zeros((n, n), dtype=np.float64)
    cdef const double[:, ::1] bv = b
    cdef double[:, ::1] lv = l_arr
    cdef Py_ssize_t bad
    with nogil:
        bad = _chol(bv, lv, n)
    if bad >= 0:
        raise ArithmeticError(f"matrix not positive definite at row {bad}")
    return l_arr


cdef void _forward_rows(const double[:, ::1] l, const double[:, ::1] src,
                        double[:, ::1] dst, Py_ssize_t n) noexcept nogil:
    # dst = L^-1 src, rows of src processed by forward substitution
    cdef Py_ssize_t i, j, k
    cdef double lij, lii
    for i in range(n):
        for k in range(n):
            dst[i, k] = src[i, k]
        for j in range(i):
            lij = l[i, j]
            if lij != 0.0:
                for k in range(n):
                    dst[i, k] -= lij * dst[j, k]
        lii = l[i, i]
        for k in range(n):
            dst[i, k] /= lii


def reduce_spd(a, l):
    """C = L^-1 A L^-T for the generalized-to-standard reduction (symmetrized)."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    l = np.ascontiguousarray(l, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0]
    w = np.empty((n, n), dtype=np.float64)
    ct = np.empty((n, n), dtype=np.float64)
    cdef const double[:, ::1] av = a
    cdef const double[:, ::1] lv = l
    cdef double[:, ::1] wv = w
    with nogil:
        _forward_rows(lv, av, wv, n)
    wt = np.ascontiguousarray(w.T)
    cdef const double[:, ::1] wtv = wt
    cdef double[:, ::1] ctv = ct
    with nogil:
        _forward_rows(lv, wtv, ctv, n)
    c = ct.T.copy()
    c += c.T
    c *= 0.5
    return c


cdef void _back_rows(const double[:, ::1] lt, double[:, ::1] vt,
                     Py_ssize_t m, Py_ssize_t n) noexcept nogil:
    # per row y of vt: solve L^T x = y in place; lt is L transposed (contiguous)
    cdef Py_ssize_t r, i, k
    cdef double s
    for r in range(m):
        for i in range(n - 1, -1, -1):
            s = vt[r, i]
            for k in range(i + 1, n):
                s -= lt[i, k] * vt[r, k]
            vt[r, i] = s / lt[i, i]


def back_transform_rows(l, vt):
    """In place: each row y of vt becomes the solution x of L^T x = y."""
    lt = np.ascontiguousarray(np.asarray(l, dtype=np.float64).T)
    cdef const double[:, ::1] ltv = lt
    cdef double[:, ::1] vtv = vt
    cdef Py_ssize_t m = vt.shape[0]
    cdef Py_ssize_t n = vt.shape[1]
    with nogil:
        _back_rows(ltv, vtv, m, n)


cdef void _householder(double[:, ::1] a, double[::1] d, double[::1] e,
                       double[::1] hh, double[::1] p, double[::1] q,
                       Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j, r
    cdef double scale, h, f, g, kk, s, ur, qr
    for i in range(n - 1, 1, -1):
        scale = 0.0
        for j in range(i):
            scale += fabs(a[i, j])
        if scale == 0.0:
            e[i] = a[i, i - 1]
            continue
        h = 0.0
        for j in range(i):
            a[i, j] /= scale
            h += a[i, j] * a[i, j]
        f = a[i, i - 1]
        g = -copysign(sqrt(h), f)
        e[i] = scale * g
        h -= f * g
        a[i, i - 1] = f - g
        hh[i] = h
        # p = A_block u / h ; the block keeps both triangles, rows contiguous
        for r in range(i):
            s = 0.0
            for j in range(i):
                s += a[r, j] * a[i, j]
            p[r] = s / h
        kk = 0.0
        for r in range(i):
            kk += a[i, r] * p[r]
        kk /= 2.0 * h
        for r in range(i):
            q[r] = p[r] - kk * a[i, r]
        for r in range(i):
            ur = a[i, r]
            qr = q[r]
            for j in range(i):
                a[r, j] -= ur * q[j] + qr * a[i, j]
    if n > 1:
        e[1] = a[1, 0]
    e[0] = 0.0
    for j in range(n):
        d[j] = a[j, j]


cdef void _accumulate(const double[:, ::1] a, const double[::1] hh,
                      double[:, ::1] qt, double[::1] t, Py_ssize_t n) noexcept nogil:
    # Q^T = P_2 P_3 ... P_{n-1}, grown by right-multiplication on the leading block
    cdef Py_ssize_t j, r, c
    cdef double beta, s, tb
    for j in range(2, n):
        if hh[j] == 0.0:
            continue
        beta = 1.0 / hh[j]
        for r in range(j):
            s = 0.0
            for c in range(j):
                s += qt[r, c] * a[j, c]
            t[r] = s
        for r in range(j):
            tb = t[r] * beta
            for c in range(j):
                qt[r, c] -= tb * a[j, c]


cdef int _ql(double[::1] d, double[::1] e_off, double[:, ::1] vt,
             Py_ssize_t n, Py_ssize_t nc, long sweep_cap) noexcept nogil:
    cdef Py_ssize_t l, m, i, k
    cdef long sweeps = 0
    cdef double dd, g, r, s, c, p, f, b, fr
    cdef bint underflow
    for l in range(n):
        while True:
            m = n - 1
            for i in range(l, n - 1):
                dd = fabs(d[i]) + fabs(d[i + 1])
                if fabs(e_off[i]) <= _EPS * dd:
                    m = i
                    break
            if m == l:
                break
            sweeps += 1
            if sweeps > sweep_cap:
                return 1
            g = (d[l + 1] - d[l]) / (2.0 * e_off[l])
            r = hypot(g, 1.0)
            g = d[m] - d[l] + e_off[l] / (g + copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e_off[i]
                b = c * e_off[i]
                r = hypot(f, g)
                e_off[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e_off[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                for k in range(nc):
                    fr = vt[i + 1, k]
                    vt[i + 1, k] = s * vt[i, k] + c * fr
                    vt[i, k] = c * vt[i, k] - s * fr
            if underflow:
                continue
            d[l] -= p
            e_off[l] = g
            e_off[m] = 0.0
    return 0


def tridiag_eigh(a, sweep_cap):
    """Full symmetric decomposition of dense a (which is consumed).

    Returns (d, vt): eigenvalues d[i] with eigenvector vt[i] as the matching
    row, unordered; rows are orthonormal.
    """
    a = np.array(a, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = a.shape[0]
    if n == 1:
        return a[0, :1].copy(), np.ones((1, 1))
    d_arr = np.empty(n)
    e_arr = np.zeros(n)
    hh_arr = np.zeros(n)
    p_arr = np.empty(n)
    q_arr = np.empty(n)
    qt_arr = np.eye(n)
    t_arr = np.empty(n)
    e_off_arr = np.empty(n)
    cdef double[:, ::1] av = a
    cdef double[::1] dv = d_arr
    cdef double[::1] ev = e_arr
    cdef double[::1] hhv = hh_arr
    cdef double[::1] pv = p_arr
    cdef double[::1] qv = q_arr
    cdef double[:, ::1] qtv = qt_arr
    cdef double[::1] tv = t_arr
    cdef double[::1] eoffv = e_off_arr
    cdef long cap = int(sweep_cap)
    cdef int status
    with nogil:
        _householder(av, dv, ev, hhv, pv, qv, n)
        _accumulate(av, hhv, qtv, tv, n)
        for status in range(n - 1):
            eoffv[status] = ev[status + 1]
        eoffv[n - 1] = 0.0
        status = _ql(dv, eoffv, qtv, n, n, cap)
    if status:
        raise ArithmeticError(f"implicit-shift iteration exceeded {sweep_cap} sweeps")
    return d_arr, qt_arr
