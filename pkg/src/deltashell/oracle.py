"""Transfer-matrix verifier for the radial problem.

The radial function is built piece by piece from the exact fundamental
pair ``r i_l(kappa r)`` and ``r k_l(kappa r)``; at every shell u is kept
continuous and u' jumps by ``alpha_j u(R_j)``.  Nothing here touches the
single-layer matrices, so agreement with :mod:`deltashell.boundary` is a
genuine cross-check.

Region 0 is the interior ``r < R_1``; region j (j >= 1) lies right of
shell j.  In region j the basis functions are normalized to one at the
anchor ``R_j`` (``R_1`` for region 0)::

    u(r) = exp(logscale_j) * (A_j phi+_j(r) + B_j phi-_j(r))
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import kernels
from ._numpy_kernels import propagate_arrays
from .errors import CrossCheckFailed, NotARoot, SingularWronskian
from .model import ShellConfig, validate_config
from .specfun import ELL_MAX, log_derivative_i, log_derivative_k, sph_i_scaled, sph_k_scaled

NOT_A_ROOT_TOL = 1e-6
ROOT_RTOL = 1e-9


@dataclass(frozen=True)
class RegionCoefficients:
    ell: int
    kappa: float
    radii: tuple[float, ...]
    a: tuple[float, ...]
    b: tuple[float, ...]
    logscale: tuple[float, ...]

    @property
    def n_regions(self) -> int:
        return len(self.a)

    def anchor(self, region: int) -> float:
        return self.radii[max(region - 1, 0)]

    @property
    def exterior_growing(self) -> float:
        return self.a[-1]


def _check(cfg: ShellConfig, ell: int, kappa: float) -> None:
    validate_config(cfg)
    if int(ell) != ell or not 0 <= ell <= ELL_MAX:
        raise ValueError(f"ell must be an integer in [0, {ELL_MAX}]")
    if not kappa > 0:
        raise ValueError("kappa must be positive")


def propagate(cfg: ShellConfig, ell: int, kappa: float) -> RegionCoefficients:
    _check(cfg, ell, kappa)
    A, B, ls = propagate_arrays(cfg.radii, cfg.alphas, int(ell), [kappa])
    return RegionCoefficients(
        ell=int(ell),
        kappa=float(kappa),
        radii=cfg.radii,
        a=(1.0,) + tuple(float(v) for v in A[:, 0]),
        b=(0.0,) + tuple(float(v) for v in B[:, 0]),
        logscale=(0.0,) + tuple(float(v) for v in ls[:, 0]),
    )


def mismatch(cfg: ShellConfig, ell: int, kappa: float) -> float:
    """Exterior growing coefficient, normalized so max(|a|, |b|) = 1."""
    _check(cfg, ell, kappa)
    return float(kernels.mismatch(cfg.radii, cfg.alphas, int(ell), [kappa])[0])


def mismatch_grid(cfg: ShellConfig, ell: int, kappas) -> np.ndarray:
    validate_config(cfg)
    return kernels.mismatch(cfg.radii, cfg.alphas, int(ell), kappas)


def mismatch_swave_elementary(cfg: ShellConfig, kappa: float) -> float:
    """Same quantity for ell = 0 written with sinh and exp only.

    Right of shell j, ``u = A sinh(kappa r)/sinh(kappa R_j) + B exp(-kappa (r - R_j))``
    (up to a tracked scale).  Log-derivatives at R_j are ``kappa coth(kappa R_j)``
    and ``-kappa``.
    """
    _check(cfg, 0, kappa)
    k = float(kappa)
    A, B = 1.0, 0.0
    prev = None
    for R, alpha in zip(cfg.radii, cfg.alphas):
        if prev is not None:
            # sinh(kR)/sinh(kR') = exp(k(R-R')) * expm1(-2kR)/expm1(-2kR')
            A *= math.expm1(-2.0 * k * R) / math.expm1(-2.0 * k * prev)
            B *= math.exp(-2.0 * k * (R - prev))
            top = max(abs(A), abs(B))
            A, B = A / top, B / top
        t = k * R
        grow = k / math.tanh(t) if t > 1e-8 else 1.0 / R
        wr = grow + k
        if not (wr > 0.0 and math.isfinite(wr)):
            raise SingularWronskian("interface Wronskian vanished")
        step = alpha * (A + B) / wr
        A, B = A + step, B - step
        top = max(abs(A), abs(B))
        A, B = A / top, B / top
        prev = R
    return A


def _basis_logs(ell: int, kappa: float, anchor: float, r: np.ndarray):
    """log|phi+|, log|phi-| and their log-derivatives at r (both positive)."""
    x, x0 = kappa * r, kappa * anchor
    lp = np.log(r / anchor) + np.log(sph_i_scaled(ell, x) / sph_i_scaled(ell, x0)) + (x - x0)
    lm = np.log(r / anchor) + np.log(sph_k_scaled(ell, x) / sph_k_scaled(ell, x0)) - (x - x0)
    dp = 1.0 / r + kappa * log_derivative_i(ell, x)
    dm = 1.0 / r + kappa * log_derivative_k(ell, x)
    return lp, lm, dp, dm


def _evaluate(coef: RegionCoefficients, region: int, r: np.ndarray):
    """Return (log scale, value, derivative) with u = exp(log scale) * value."""
    A, B, ls = coef.a[region], coef.b[region], coef.logscale[region]
    lp, lm, dp, dm = _basis_logs(coef.ell, coef.kappa, coef.anchor(region), r)
    top = np.maximum(np.where(A != 0.0, lp, -np.inf), np.where(B != 0.0, lm, -np.inf))
    top = np.where(np.isfinite(top), top, 0.0)
    # a zero coefficient contributes nothing, even where its basis overflows
    zero = np.zeros_like(top)
    wp = A * np.exp(lp - top) if A != 0.0 else zero
    wm = B * np.exp(lm - top) if B != 0.0 else zero
    return ls + top, wp + wm, wp * dp + wm * dm


def oracle_root(cfg: ShellConfig, ell: int, kappa: float, tol: float = 1e-15, max_width: float = 1e-4) -> float:
    """Zero of the mismatch nearest to ``kappa``.

    The bracket starts tight and widens (up to ``max_width`` relative) until
    the mismatch changes sign.
    """
    f = lambda k: float(kernels.mismatch(cfg.radii, cfg.alphas, ell, [k])[0])  # noqa: E731
    f0 = f(kappa)
    if f0 == 0.0:
        return kappa
    width = 1e-13
    while width <= max_width * (1 + 1e-9):
        lo, hi = kappa * (1 - width), kappa * (1 + width)
        flo, fhi = f(lo), f(hi)
        if flo * f0 <= 0:
            return lo if flo == 0.0 else brentq(f, lo, kappa, xtol=tol * kappa)
        if fhi * f0 <= 0:
            return hi if fhi == 0.0 else brentq(f, kappa, hi, xtol=tol * kappa)
        width *= 10.0
    raise CrossCheckFailed(f"no mismatch zero within {max_width:g} of kappa={kappa!r} (ell={ell})")


def _inward(cfg: ShellConfig, ell: int, kappa: float):
    """Coefficients of the decaying solution, propagated from outside in."""
    R, al = cfg.radii, cfg.alphas
    n = len(R)
    A = [0.0] * (n + 1)
    B = [0.0] * (n + 1)
    ls = [0.0] * (n + 1)
    B[n] = 1.0
    for j in range(n, 0, -1):
        # value and slopes at R_j; region j is anchored there
        lp, lm, dp, dm = _basis_logs(ell, kappa, R[j - 1], np.array([R[j - 1]]))
        v = A[j] + B[j]
        slope = A[j] * dp[0] + B[j] * dm[0] - al[j - 1] * v
        anchor = R[max(j - 2, 0)]
        lp, lm, dp, dm = _basis_logs(ell, kappa, anchor, np.array([R[j - 1]]))
        wr = dp[0] - dm[0]
        if not (wr > 0.0 and math.isfinite(wr)):
            raise SingularWronskian("interface Wronskian vanished or is not finite")
        ta = (slope - dm[0] * v) / wr
        tb = v - ta
        la = math.log(abs(ta)) - lp[0] if ta != 0.0 else -math.inf
        lb = math.log(abs(tb)) - lm[0] if tb != 0.0 else -math.inf
        top = max(la, lb)
        A[j - 1] = math.copysign(math.exp(la - top), ta) if ta != 0.0 else 0.0
        B[j - 1] = math.copysign(math.exp(lb - top), tb) if tb != 0.0 else 0.0
        ls[j - 1] = ls[j] + top
    return A, B, ls


def eigen_coefficients(cfg: ShellConfig, ell: int, kappa_root: float) -> RegionCoefficients:
    """Region coefficients of the bound state at ``kappa_root``.

    The regular solution is carried outward and the decaying one inward;
    they are joined at the shell where the jump condition is best met,
    so every other interface condition holds by construction.
    """
    coef = propagate(cfg, ell, kappa_root)
    try:
        # deep states make the mismatch steep, so a sign change within
        # ROOT_RTOL also counts as a root
        kappa = oracle_root(cfg, ell, kappa_root, max_width=ROOT_RTOL)
    except CrossCheckFailed:
        if abs(coef.exterior_growing) > NOT_A_ROOT_TOL:
            raise NotARoot(
                f"kappa={kappa_root!r} is not a root in channel {ell}: "
                f"mismatch {coef.exterior_growing:.3e}"
            ) from None
        kappa = kappa_root
    coef = propagate(cfg, ell, kappa)
    ia, ib, ils = _inward(cfg, ell, kappa)
    inner = RegionCoefficients(coef.ell, kappa, coef.radii, tuple(ia), tuple(ib), tuple(ils))
    best = None
    for m, (R, alpha) in enumerate(zip(cfg.radii, cfg.alphas)):
        r = np.array([R])
        lg_o, v_o, d_o = _evaluate(coef, m, r)
        lg_i, v_i, d_i = _evaluate(inner, m + 1, r)
        if v_o[0] == 0.0 or v_i[0] == 0.0:
            continue
        defect = abs((d_i[0] / v_i[0] - d_o[0] / v_o[0]) - alpha)
        if best is None or defect < best[0]:
            shift = float(lg_o[0] - lg_i[0]) + math.log(abs(v_o[0] / v_i[0]))
            best = (defect, m, shift, math.copysign(1.0, v_o[0] * v_i[0]))
    if best is None:
        return coef
    _, m, shift, sign = best
    a = coef.a[: m + 1] + tuple(sign * x for x in inner.a[m + 1:])
    b = coef.b[: m + 1] + tuple(sign * x for x in inner.b[m + 1:])
    ls = coef.logscale[: m + 1] + tuple(x + shift for x in inner.logscale[m + 1:])
    return RegionCoefficients(coef.ell, kappa, coef.radii, a, b, ls)


def eigenfunction_samples(cfg: ShellConfig, ell: int, kappa_root: float, r_grid) -> list[tuple[float, float]]:
    """Radial profile u(r) on ``r_grid`` normalized to max |u| = 1."""
    coef = eigen_coefficients(cfg, ell, kappa_root)
    r = np.asarray(r_grid, dtype=float).reshape(-1)
    if np.any(r <= 0):
        raise ValueError("sample radii must be positive")
    logs = np.empty(r.size)
    vals = np.empty(r.size)
    regions = np.searchsorted(np.asarray(cfg.radii), r, side="right")
    for reg in np.unique(regions):
        sel = regions == reg
        lg, v, _ = _evaluate(coef, int(reg), r[sel])
        logs[sel], vals[sel] = lg, v
    mags = np.where(vals != 0.0, logs + np.log(np.abs(vals) + (vals == 0.0)), -np.inf)
    peak = np.max(mags)
    u = np.sign(vals) * np.exp(mags - peak)
    # fix the overall sign: positive near the origin
    first = u[np.nonzero(u)[0][0]] if np.any(u) else 1.0
    if first < 0:
        u = -u
    return [(float(a), float(b)) for a, b in zip(r, u)]


@dataclass(frozen=True)
class InterfaceData:
    radius: float
    value_left: float
    value_right: float
    slope_left: float
    slope_right: float

    @property
    def jump(self) -> float:
        return self.slope_right - self.slope_left


def interface_data(cfg: ShellConfig, ell: int, kappa: float, at_root: bool = False) -> list[InterfaceData]:
    """One-sided values and slopes of u at every shell, in one common scale.

    With ``at_root=True`` the bound state itself is used (see
    :func:`eigen_coefficients`); otherwise the outward solution.
    """
    coef = eigen_coefficients(cfg, ell, kappa) if at_root else propagate(cfg, ell, kappa)
    out = []
    ref = None
    for j, R in enumerate(cfg.radii):
        r = np.array([R])
        lg_l, v_l, d_l = _evaluate(coef, j, r)
        lg_r, v_r, d_r = _evaluate(coef, j + 1, r)
        if ref is None:
            ref = float(lg_l[0])
        sl = math.exp(float(lg_l[0]) - ref)
        sr = math.exp(float(lg_r[0]) - ref)
        out.append(
            InterfaceData(
                radius=float(R),
                value_left=float(v_l[0]) * sl,
                value_right=float(v_r[0]) * sr,
                slope_left=float(d_l[0]) * sl,
                slope_right=float(d_r[0]) * sr,
            )
        )
    return out


def count_nodes(samples, floor: float = 1e-9) -> int:
    """Sign changes of u along the samples, ignoring values below ``floor``."""
    signs = [math.copysign(1.0, u) for _, u in samples if abs(u) > floor]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)
