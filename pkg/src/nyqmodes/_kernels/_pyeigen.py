"""Pure-numpy eigensolver kernel.

Same algorithm as the compiled kernel (_cyeigen), with the loop bodies phrased
as numpy row operations: Cholesky factorization, two-sided triangular reduction
of the generalized pair, Householder tridiagonalization with transposed
eigenvector accumulation, and implicit-shift QL iteration. Row-major layouts are
chosen so every inner operation streams over contiguous memory.

Kernels raise ArithmeticError on numerical failure; the driver maps those to the
package's solver exceptions. All routines are deterministic: fixed operation
order, no threading, no randomized pivoting.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

# IEEE double precision unit roundoff; QL deflation threshold scale.
_EPS = np.finfo(float).eps


def cholesky_lower(b: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor of symmetric positive definite b (b = L L^T)."""
    n = b.shape[0]
    l = np.zeros_like(b)
    for k in range(n):
        s = b[k, k] - l[k, :k] @ l[k, :k]
        if not s > 0.0:
            raise ArithmeticError(f"matrix not positive definite at row {k}")
        lkk = math.sqrt(s)
        l[k, k] = lkk
        if k + 1 < n:
            l[k + 1 :, k] = (b[k + 1 :, k] - l[k + 1 :, :k] @ l[k, :k]) / lkk
    return l


def reduce_spd(a: np.ndarray, l: np.ndarray) -> np.ndarray:
    """C = L^-1 A L^-T for the generalized-to-standard reduction (symmetrized)."""
    n = a.shape[0]
    # forward substitution, rows: W = L^-1 A
    w = np.empty_like(a)
    for i in range(n):
        w[i] = (a[i] - l[i, :i] @ w[:i]) / l[i, i]
    # second forward substitution on the transpose: C^T = L^-1 W^T
    ct = np.empty_like(a)
    wt = w.T.copy()
    for i in range(n):
        ct[i] = (wt[i] - l[i, :i] @ ct[:i]) / l[i, i]
    c = ct.T.copy()
    c += c.T
    c *= 0.5
    return c


def back_transform_rows(l: np.ndarray, vt: np.ndarray) -> None:
    """In place: each row y of vt becomes the solution x of L^T x = y."""
    n = l.shape[0]
    for i in range(n - 1, -1, -1):
        if i + 1 < n:
            vt[:, i] -= vt[:, i + 1 :] @ l[i + 1 :, i]
        vt[:, i] /= l[i, i]


def _householder_reduce(a: np.ndarray):
    """Reduce symmetric a to tridiagonal form in place.

    Returns (d, e, hh): diagonal, subdiagonal (e[i] couples i and i-1, e[0]=0),
    and the Householder scalars. Reflector i (support 0..i-1) is left in
    a[i, :i]; hh[i] = |u|^2 / 2, with hh[i] = 0 marking an identity step.
    """
    n = a.shape[0]
    d = np.empty(n)
    e = np.zeros(n)
    hh = np.zeros(n)
    for i in range(n - 1, 0, -1):
        if i == 1:
            e[1] = a[1, 0]
            continue
        row = a[i, :i]
        scale = np.sum(np.abs(row))
        if scale == 0.0:
            e[i] = a[i, i - 1]
            continue
        row /= scale
        h = row @ row
        f = row[i - 1]
        g = -math.copysign(math.sqrt(h), f)
        e[i] = scale * g
        h -= f * g
        row[i - 1] = f - g
        hh[i] = h
        # similarity update of the leading block by the reflector P = I - u u^T/h
        u = row
        p = (a[:i, :i] @ u) / h
        k = (u @ p) / (2.0 * h)
        q = p - k * u
        a[:i, :i] -= np.outer(u, q) + np.outer(q, u)
    e[0] = 0.0
    for j in range(n):
        d[j] = a[j, j]
    return d, e, hh


def _accumulate_qt(a: np.ndarray, hh: np.ndarray) -> np.ndarray:
    """Rows-eigenbasis accumulation: returns Q^T as the product P_2 P_3 ... P_{n-1}.

    Built by right-multiplying a growing leading block, so work stays O(n^3 / 3)
    and every update streams over contiguous rows.
    """
    n = a.shape[0]
    qt = np.eye(n)
    for j in range(2, n):
        if hh[j] == 0.0:
            continue
        u = a[j, :j]
        t = qt[:j, :j] @ u
        qt[:j, :j] -= np.outer(t, u / hh[j])
    return qt


def _ql_implicit(d: np.ndarray, e_off: np.ndarray, vt: np.ndarray, sweep_cap: int) -> None:
    """Implicit-shift QL on the tridiagonal (d, e_off), rotating rows of vt.

    e_off[i] couples i and i+1 (e_off[n-1] is workspace). Raises after
    sweep_cap implicit-shift sweeps.
    """
    n = d.shape[0]
    sweeps = 0
    for l in range(n):
        while True:
            for m in range(l, n - 1):
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e_off[m]) <= _EPS * dd:
                    break
            else:
                m = n - 1
            if m == l:
                break
            sweeps += 1
            if sweeps > sweep_cap:
                raise ArithmeticError(
                    f"implicit-shift iteration exceeded {sweep_cap} sweeps"
                )
            g = (d[l + 1] - d[l]) / (2.0 * e_off[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e_off[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e_off[i]
                b = c * e_off[i]
                r = math.hypot(f, g)
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
                # plane rotation of eigenvector rows i and i+1
                fr = vt[i + 1].copy()
                vt[i + 1] = s * vt[i] + c * fr
                vt[i] *= c
                vt[i] -= s * fr
            if underflow:
                continue
            d[l] -= p
            e_off[l] = g
            e_off[m] = 0.0


def tridiag_eigh(a: np.ndarray, sweep_cap: int):
    """Full symmetric decomposition of dense a (which is consumed).

    Returns (d, vt): eigenvalues d[i] with eigenvector vt[i] as the matching
    row, unordered; rows are orthonormal.
    """
    a = np.array(a, dtype=float, order="C", copy=True)
    n = a.shape[0]
    if n == 1:
        return a[0, :1].copy(), np.ones((1, 1))
    d, e, hh = _householder_reduce(a)
    vt = _accumulate_qt(a, hh)
    e_off = np.empty(n)
    e_off[: n - 1] = e[1:]
    e_off[n - 1] = 0.0
    _ql_implicit(d, e_off, vt, sweep_cap)
    return d, vt
