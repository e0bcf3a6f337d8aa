# cython: language_level=3
"""Compiled kernels: channel determinant, transfer-matrix mismatch, s-wave S(k).

Mirrors ``_numpy_kernels`` point by point; loops run without the GIL so
callers may sweep channels from several threads.
"""
import numpy as np

from libc.math cimport exp, expm1, sqrt, fabs, log

cdef enum:
    MAXN = 16
    MAXL = 66


class SingularWronskianError(ArithmeticError):
    pass


cdef inline double _x_coth(double x) noexcept nogil:
    if x < 1e-4:
        return 1.0 + x * x / 3.0 - x * x * x * x / 45.0
    return x + 2.0 * x / expm1(2.0 * x)


cdef inline double _i0s(double x) noexcept nogil:
    return -expm1(-2.0 * x) / (2.0 * x)


cdef void _ratios(int top, double x, double* rho, double* s) noexcept nogil:
    """rho[k] = i_k/i_{k-1}, s[k] = k_k/k_{k-1} for k = 1..top."""
    cdef int start = top + 8 + <int>sqrt(40.0 * x)
    cdef double r = x / (start + sqrt((start + 1.0) * (start + 1.0) + x * x))
    cdef int k
    for k in range(start, 0, -1):
        r = 1.0 / ((2 * k + 1) / x + r)
        if k <= top:
            rho[k] = r
    cdef double q = 1.0 + 1.0 / x
    s[1] = q
    for k in range(1, top):
        q = 1.0 / q + (2 * k + 1) / x
        s[k + 1] = q


cdef double _det(double* a, int n) noexcept nogil:
    """Determinant by LU with partial pivoting; destroys ``a`` (row-major n x n)."""
    cdef int i, j, c, p
    cdef double det = 1.0, big, t, f
    for c in range(n):
        p = c
        big = fabs(a[c * n + c])
        for i in range(c + 1, n):
            t = fabs(a[i * n + c])
            if t > big:
                big = t
                p = i
        if big == 0.0:
            return 0.0
        if p != c:
            for j in range(n):
                t = a[c * n + j]
                a[c * n + j] = a[p * n + j]
                a[p * n + j] = t
            det = -det
        det *= a[c * n + c]
        for i in range(c + 1, n):
            f = a[i * n + c] / a[c * n + c]
            if f != 0.0:
                for j in range(c + 1, n):
                    a[i * n + j] -= f * a[c * n + j]
    return det


cdef double _channel_det_one(const double* R, const double* al, int n, int ell,
                             double kap) noexcept nogil:
    cdef double rho[MAXN][MAXL]
    cdef double s[MAXN][MAXL]
    cdef double mat[MAXN * MAXN]
    cdef double x[MAXN]
    cdef int top = ell if ell > 0 else 1
    cdef int i, j, q
    cdef double val, pair
    for i in range(n):
        x[i] = kap * R[i]
        if ell:
            _ratios(top, x[i], &rho[i][0], &s[i][0])
    for i in range(n):
        for j in range(i, n):
            val = -expm1(-2.0 * x[i]) / (2.0 * kap * R[i] * R[j])
            if ell:
                pair = 1.0
                for q in range(1, ell + 1):
                    pair *= rho[i][q] * s[j][q]
                val *= pair
            val *= exp(-kap * (R[j] - R[i]))
            mat[i * n + j] = val * al[j] * R[j] * R[j]
            mat[j * n + i] = val * al[i] * R[i] * R[i]
        mat[i * n + i] += 1.0
    return _det(mat, n)


cdef int _mismatch_one(const double* R, const double* al, int n, int ell,
                       double kap, double* out) noexcept nogil:
    cdef double rho[MAXN][MAXL]
    cdef double s[MAXN][MAXL]
    cdef double x[MAXN]
    cdef double lp[MAXN]
    cdef double lm[MAXN]
    cdef int top = ell if ell > 0 else 1
    cdef int j, q
    cdef double di, dk, tp, tm, gap, A, B, norm, jump, wr
    for j in range(n):
        x[j] = kap * R[j]
        _ratios(top, x[j], &rho[j][0], &s[j][0])
        if ell == 0:
            di = rho[j][1]
            dk = -s[j][1]
        else:
            di = 1.0 / rho[j][ell] - (ell + 1) / x[j]
            dk = -1.0 / s[j][ell] - (ell + 1) / x[j]
        lp[j] = 1.0 / R[j] + kap * di
        lm[j] = 1.0 / R[j] + kap * dk
    A = 1.0
    B = 0.0
    for j in range(n):
        if j:
            tp = (R[j] / R[j - 1]) * _i0s(x[j]) / _i0s(x[j - 1])
            tm = x[j - 1] / x[j] * (R[j] / R[j - 1])
            for q in range(1, ell + 1):
                tp *= rho[j][q] / rho[j - 1][q]
                tm *= s[j][q] / s[j - 1][q]
            gap = kap * (R[j] - R[j - 1])
            A = A * tp
            B = B * tm * exp(-2.0 * gap)
            norm = fabs(A) if fabs(A) > fabs(B) else fabs(B)
            A /= norm
            B /= norm
        wr = lp[j] - lm[j]
        if not (wr > 0.0 and wr < 1e300):
            return -1
        jump = al[j] * (A + B) / wr
        A += jump
        B -= jump
        norm = fabs(A) if fabs(A) > fabs(B) else fabs(B)
        A /= norm
        B /= norm
    out[0] = A
    return 0


def channel_det(radii, alphas, int ell, kappas):
    """det(I + m_ell(-kappa^2) diag(alpha_j R_j^2)) for each kappa."""
    cdef double[::1] R = np.ascontiguousarray(radii, dtype=float)
    cdef double[::1] al = np.ascontiguousarray(alphas, dtype=float)
    cdef double[::1] k = np.ascontiguousarray(kappas, dtype=float).reshape(-1)
    cdef int n = R.shape[0]
    cdef Py_ssize_t m = k.shape[0], p
    if n > MAXN or ell > MAXL - 2:
        raise ValueError("too many shells or too high an order for the compiled kernel")
    out = np.empty(m)
    cdef double[::1] o = out
    with nogil:
        for p in range(m):
            o[p] = _channel_det_one(&R[0], &al[0], n, ell, k[p])
    return out


def mismatch(radii, alphas, int ell, kappas):
    """Normalized exterior coefficient of the growing solution."""
    cdef double[::1] R = np.ascontiguousarray(radii, dtype=float)
    cdef double[::1] al = np.ascontiguousarray(alphas, dtype=float)
    cdef double[::1] k = np.ascontiguousarray(kappas, dtype=float).reshape(-1)
    cdef int n = R.shape[0]
    cdef Py_ssize_t m = k.shape[0], p
    cdef int bad = 0
    if n > MAXN or ell > MAXL - 2:
        raise ValueError("too many shells or too high an order for the compiled kernel")
    out = np.empty(m)
    cdef double[::1] o = out
    with nogil:
        for p in range(m):
            if _mismatch_one(&R[0], &al[0], n, ell, k[p], &o[p]) != 0:
                bad = 1
                break
    if bad:
        raise SingularWronskianError("interface Wronskian vanished or is not finite")
    return out


def s_wave(double R1, double d, double alpha1, double alpha2, kappas):
    """S(k) = F_inf(k) + G(k) exp(-2kd) for each k."""
    cdef double[::1] k = np.ascontiguousarray(kappas, dtype=float).reshape(-1)
    cdef Py_ssize_t m = k.shape[0], p
    out = np.empty(m)
    cdef double[::1] o = out
    cdef double kk, g, e
    with nogil:
        for p in range(m):
            kk = k[p]
            g = alpha1 + _x_coth(kk * R1) / R1
            e = exp(-2.0 * kk * d)
            if kk * d < 0.5:
                o[p] = (2.0 * kk + 2.0 * g + alpha2 * (1.0 + e)
                        - alpha2 * g * expm1(-2.0 * kk * d) / kk)
            else:
                o[p] = (kk + g) * (2.0 * kk + alpha2) / kk + alpha2 * (1.0 - g / kk) * e
    return out
