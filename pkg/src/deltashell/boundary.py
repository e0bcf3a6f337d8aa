"""Per-channel boundary matrices.

For each angular momentum ell the boundary operator I + m(z) Theta reduces
to the N x N matrix ``I + m_ell(-kappa^2) diag(alpha_j R_j^2)`` with
``m_ell[i, j] = kappa i_ell(kappa R_<) k_ell(kappa R_>)``.  Its zeros in
kappa are the bound states of that channel.  At zero energy the matrix
``A_ell`` plays the same role for ell >= 1; the two are related by
``A_ell = D (I + m_ell(0) Theta) D^{-1}`` with ``D = diag(R_j)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from ._numpy_kernels import green_matrix
from .errors import SWaveThresholdForbidden, UnsupportedOrder
from .model import ShellConfig, validate_config
from .specfun import ELL_MAX


@dataclass(frozen=True)
class ChannelMatrix:
    ell: int
    kappa: float | None
    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def _check_ell(ell: int) -> int:
    if int(ell) != ell or ell < 0 or ell > ELL_MAX:
        raise UnsupportedOrder(f"angular momentum must be in [0, {ELL_MAX}], got {ell}")
    return int(ell)


def theta(cfg: ShellConfig) -> np.ndarray:
    """Diagonal of Theta, alpha_j R_j^2 (the surface measure folded in)."""
    R = np.asarray(cfg.radii)
    return np.asarray(cfg.alphas) * R * R


def m_matrix(cfg: ShellConfig, ell: int, kappa: float) -> ChannelMatrix:
    validate_config(cfg)
    ell = _check_ell(ell)
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    entries = green_matrix(cfg.radii, ell, [kappa])[0]
    return ChannelMatrix(ell, float(kappa), entries)


def boundary_matrix(cfg: ShellConfig, ell: int, kappa: float) -> np.ndarray:
    """K_ell = I + m_ell(-kappa^2) Theta."""
    m = m_matrix(cfg, ell, kappa).entries
    return np.eye(cfg.n_shells) + m * theta(cfg)[None, :]


def secular_det(cfg: ShellConfig, ell: int, kappa: float) -> float:
    """det(I + m_ell(-kappa^2) Theta), by LU with partial pivoting."""
    validate_config(cfg)
    ell = _check_ell(ell)
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    return float(kernels.channel_det(cfg.radii, cfg.alphas, ell, [kappa])[0])


def secular_det_grid(cfg: ShellConfig, ell: int, kappas) -> np.ndarray:
    return kernels.channel_det(cfg.radii, cfg.alphas, _check_ell(ell), kappas)


def secular_det_closed(cfg: ShellConfig, ell: int, kappa: float) -> float:
    """Explicit 1x1 / 2x2 expansion of the determinant (N <= 2 only)."""
    m = m_matrix(cfg, ell, kappa).entries
    t = theta(cfg)
    if cfg.n_shells == 1:
        return 1.0 + m[0, 0] * t[0]
    if cfg.n_shells == 2:
        return (1.0 + m[0, 0] * t[0]) * (1.0 + m[1, 1] * t[1]) - m[0, 1] * m[1, 0] * t[0] * t[1]
    raise ValueError("closed form only for one or two shells")


def threshold_matrix(cfg: ShellConfig, ell: int) -> ChannelMatrix:
    """Zero-energy matrix a_ij = delta_ij + alpha_j/(2l+1) R_<^{l+1} / R_>^l."""
    validate_config(cfg)
    ell = _check_ell(ell)
    if ell == 0:
        raise SWaveThresholdForbidden("s-wave has no zero-energy eigenstate")
    R = np.asarray(cfg.radii)
    lo = np.minimum.outer(R, R)
    hi = np.maximum.outer(R, R)
    a = np.asarray(cfg.alphas)[None, :] / (2 * ell + 1) * lo ** (ell + 1) / hi**ell
    return ChannelMatrix(ell, None, np.eye(R.size) + a)


def threshold_det(cfg: ShellConfig, ell: int) -> float:
    return float(np.linalg.det(threshold_matrix(cfg, ell).entries))


def threshold_kernel_dim(cfg: ShellConfig, ell: int, tol: float = 1e-10) -> int:
    """Number of singular values of A_ell below ``tol``."""
    sv = np.linalg.svd(threshold_matrix(cfg, ell).entries, compute_uv=False)
    return int(np.sum(sv < tol))


def threshold_alpha2(R1: float, R2: float, alpha1: float, ell: int) -> float:
    """alpha2 that makes det A_ell vanish for two shells.

    Solves ``a1 a2 R1^{2l+2} R2^{-2l} = (a1 R1 + 2l + 1)(a2 R2 + 2l + 1)`` for a2.
    """
    m = 2 * ell + 1
    p = alpha1 * R1 + m
    denom = alpha1 * R1 ** (2 * ell + 2) / R2 ** (2 * ell) - p * R2
    if denom == 0.0:
        raise ZeroDivisionError("no finite alpha2 solves the threshold identity")
    return p * m / denom
