"""Pure numpy kernels, vectorized over a kappa grid.

Same call signatures as the compiled ``_kernels`` extension, which is
preferred at import when available (see :mod:`deltashell.kernels`).
"""
from __future__ import annotations

import numpy as np

from .errors import SingularWronskian
from .secular import scaled_secular_raw
from .specfun import i0_scaled, i_ratios, k_ratios


def _prepare(radii, alphas, kappas):
    R = np.ascontiguousarray(radii, dtype=float)
    al = np.ascontiguousarray(alphas, dtype=float)
    k = np.ascontiguousarray(kappas, dtype=float).reshape(-1)
    return R, al, k


def green_matrix(radii, ell: int, kappas) -> np.ndarray:
    """Stack of m_ell(-kappa^2) matrices, shape (K, N, N)."""
    R, _, k = _prepare(radii, radii, kappas)
    n = R.size
    x = k[:, None] * R[None, :]
    pair = None
    if ell:
        rho = i_ratios(ell, x)[:ell]
        s = k_ratios(ell, x)[:ell]
    out = np.empty((k.size, n, n))
    for i in range(n):
        for j in range(i, n):
            val = -np.expm1(-2.0 * x[:, i]) / (2.0 * k * R[i] * R[j])
            if ell:
                pair = np.prod(rho[:, :, i] * s[:, :, j], axis=0)
                val = val * pair
            val = val * np.exp(-k * (R[j] - R[i]))
            out[:, i, j] = val
            out[:, j, i] = val
    return out


def channel_det(radii, alphas, ell: int, kappas) -> np.ndarray:
    """det(I + m_ell(-kappa^2) diag(alpha_j R_j^2)) for each kappa."""
    R, al, k = _prepare(radii, alphas, kappas)
    m = green_matrix(R, ell, k)
    mat = np.eye(R.size)[None] + m * (al * R * R)[None, None, :]
    return np.linalg.det(mat)


def log_derivatives(R, ell: int, k):
    """Log-derivatives of r i_l(kr) and r k_l(kr) at each radius, shape (K, N)."""
    x = k[:, None] * R[None, :]
    rho = i_ratios(ell, x)
    s = k_ratios(ell, x)
    if ell == 0:
        di, dk = rho[0], -s[0]
    else:
        di = 1.0 / rho[ell - 1] - (ell + 1) / x
        dk = -1.0 / s[ell - 1] - (ell + 1) / x
    lam_p = 1.0 / R[None, :] + k[:, None] * di
    lam_m = 1.0 / R[None, :] + k[:, None] * dk
    return x, rho, s, lam_p, lam_m


def propagate_arrays(radii, alphas, ell: int, kappas):
    """Transfer the regular solution outward across every shell.

    In the region right of shell j the solution is
    ``exp(logscale_j) * (A_j phi+_j(r) + B_j phi-_j(r))``, where ``phi+-_j`` are
    ``r i_l(kr)`` and ``r k_l(kr)`` normalized to 1 at ``R_j``.  Returns arrays
    ``A, B, logscale`` of shape (N, K), with ``max(|A_j|, |B_j|) = 1``.
    """
    R, al, k = _prepare(radii, alphas, kappas)
    n = R.size
    x, rho, s, lam_p, lam_m = log_derivatives(R, ell, k)
    wr = lam_p - lam_m
    if not np.all(np.isfinite(wr) & (wr > 0.0)):
        raise SingularWronskian("interface Wronskian vanished or is not finite")
    A_out = np.empty((n, k.size))
    B_out = np.empty((n, k.size))
    ls_out = np.empty((n, k.size))
    A = np.ones(k.size)
    B = np.zeros(k.size)
    logscale = np.zeros(k.size)
    for j in range(n):
        if j:
            tp = (R[j] / R[j - 1]) * i0_scaled(x[:, j]) / i0_scaled(x[:, j - 1])
            tm = x[:, j - 1] / x[:, j] * (R[j] / R[j - 1])
            if ell:
                tp = tp * np.prod(rho[:ell, :, j] / rho[:ell, :, j - 1], axis=0)
                tm = tm * np.prod(s[:ell, :, j] / s[:ell, :, j - 1], axis=0)
            gap = k * (R[j] - R[j - 1])
            A = A * tp
            B = B * tm * np.exp(-2.0 * gap)
            logscale = logscale + gap
            norm = np.maximum(np.abs(A), np.abs(B))
            A, B = A / norm, B / norm
            logscale = logscale + np.log(norm)
        jump = al[j] * (A + B) / wr[:, j]
        A = A + jump
        B = B - jump
        norm = np.maximum(np.abs(A), np.abs(B))
        A, B = A / norm, B / norm
        logscale = logscale + np.log(norm)
        A_out[j], B_out[j], ls_out[j] = A, B, logscale
    return A_out, B_out, ls_out


def mismatch(radii, alphas, ell: int, kappas) -> np.ndarray:
    """Normalized exterior coefficient of the growing solution."""
    A, _, _ = propagate_arrays(radii, alphas, ell, kappas)
    return A[-1].copy()


def s_wave(R1: float, d: float, alpha1: float, alpha2: float, kappas) -> np.ndarray:
    k = np.ascontiguousarray(kappas, dtype=float).reshape(-1)
    return np.asarray(scaled_secular_raw(k, R1, d, alpha1, alpha2), dtype=float).reshape(-1)
