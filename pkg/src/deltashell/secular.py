"""Closed-form s-wave machinery for two concentric shells.

With ``gamma1(k) = alpha1 + k coth(k R1)`` and ``d = R2 - R1`` the s-wave
bound states ``E = -k^2`` are the positive roots of

    F_d(k) = [gamma1 + alpha2 + k] cosh(kd) + [k + gamma1 + alpha2 gamma1 / k] sinh(kd)
           = (F_inf(k) e^{kd} + G(k) e^{-kd}) / 2,

    F_inf(k) = (k + gamma1)(2k + alpha2) / k,   G(k) = alpha2 (1 - gamma1 / k).

Root finding uses the scaled function ``S = F_inf + G e^{-2kd} = 2 e^{-kd} F_d``,
which has the sign of ``F_d`` and is representable for any ``d``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import CrossCheckFailed, DegenerateRoot, NoInnerBoundState, WrongShellCount
from .model import ShellConfig, validate_config
from .specfun import coth_stable, x_coth

GAMMA_SERIES_CUTOFF = 0.05
SPLIT_FORM_KD = 30.0
_EPS = np.finfo(float).eps


def _two_shell(cfg: ShellConfig) -> tuple[float, float, float, float]:
    validate_config(cfg)
    if cfg.n_shells != 2:
        raise WrongShellCount(f"two-shell formula needs N=2, got {cfg.n_shells}")
    (r1, r2), (a1, a2) = cfg.radii, cfg.alphas
    return r1, r2 - r1, a1, a2


def _out(v):
    return v[()] if isinstance(v, np.ndarray) and v.ndim == 0 else v


# -- gamma1 and its derivatives ---------------------------------------------


def gamma1(kappa, R1: float, alpha1: float):
    """alpha1 + kappa coth(kappa R1); equals alpha1 + 1/R1 in the limit kappa -> 0."""
    kappa = np.asarray(kappa, dtype=float)
    return _out(alpha1 + x_coth(kappa * R1) / R1)


def gamma1_prime(kappa, R1: float):
    """d gamma1 / d kappa = coth t - t csch^2 t with t = kappa R1 (always > 0)."""
    t = np.asarray(kappa, dtype=float) * R1
    t2 = t * t
    series = t * (2.0 / 3.0 + t2 * (-4.0 / 45.0 + t2 * (4.0 / 315.0 - t2 * 8.0 / 4725.0)))
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        em = np.expm1(-2.0 * t)
        csch2 = 4.0 * np.exp(-2.0 * t) / (em * em)
        exact = coth_stable(t) - t * csch2
    return _out(np.where(t < GAMMA_SERIES_CUTOFF, series, exact))


def gamma1_second(kappa, R1: float):
    """d^2 gamma1 / d kappa^2 = 2 R1 csch^2 t (t coth t - 1)."""
    t = np.asarray(kappa, dtype=float) * R1
    t2 = t * t
    series = R1 * (2.0 / 3.0 + t2 * (-12.0 / 45.0 + t2 * (20.0 / 315.0 - t2 * 56.0 / 4725.0)))
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        em = np.expm1(-2.0 * t)
        csch2 = 4.0 * np.exp(-2.0 * t) / (em * em)
        exact = 2.0 * R1 * csch2 * (x_coth(t) - 1.0)
    return _out(np.where(t < GAMMA_SERIES_CUTOFF, series, exact))


# -- F_inf, G and derivatives -------------------------------------------------


def f_inf(kappa, R1, alpha1, alpha2):
    k = np.asarray(kappa, dtype=float)
    g = gamma1(k, R1, alpha1)
    return _out((k + g) * (2.0 * k + alpha2) / k)


def f_inf_prime(kappa, R1, alpha1, alpha2):
    k = np.asarray(kappa, dtype=float)
    p = k + gamma1(k, R1, alpha1)
    q = 2.0 * k + alpha2
    dp = 1.0 + gamma1_prime(k, R1)
    return _out((dp * q + 2.0 * p) / k - p * q / (k * k))


def f_inf_second(kappa, R1, alpha1, alpha2):
    k = np.asarray(kappa, dtype=float)
    p = k + gamma1(k, R1, alpha1)
    q = 2.0 * k + alpha2
    dp = 1.0 + gamma1_prime(k, R1)
    ddp = gamma1_second(k, R1)
    return _out(
        (ddp * q + 4.0 * dp) / k
        - 2.0 * (dp * q + 2.0 * p) / k**2
        + 2.0 * p * q / k**3
    )


def g_func(kappa, R1, alpha1, alpha2):
    k = np.asarray(kappa, dtype=float)
    return _out(alpha2 * (1.0 - gamma1(k, R1, alpha1) / k))


def g_prime(kappa, R1, alpha1, alpha2):
    k = np.asarray(kappa, dtype=float)
    g = gamma1(k, R1, alpha1)
    return _out(alpha2 * (g / (k * k) - gamma1_prime(k, R1) / k))


# -- the secular function in its three forms ----------------------------------


def scaled_secular_raw(kappa, R1, d, alpha1, alpha2):
    """S(k) = F_inf + G e^{-2kd} from scalar parameters (vectorized in k).

    For small ``kd`` the algebraically equivalent form
    ``2k + 2 gamma1 + alpha2 (1 + e) - alpha2 gamma1 expm1(-2kd) / k`` is used;
    it avoids the 1/k cancellation between F_inf and G near the threshold.
    """
    k = np.asarray(kappa, dtype=float)
    g = alpha1 + x_coth(k * R1) / R1
    e = np.exp(-2.0 * k * d)
    near = 2.0 * k + 2.0 * g + alpha2 * (1.0 + e) - alpha2 * g * np.expm1(-2.0 * k * d) / k
    far = (k + g) * (2.0 * k + alpha2) / k + alpha2 * (1.0 - g / k) * e
    return _out(np.where(k * d < 0.5, near, far))


def scaled_secular(kappa, cfg: ShellConfig):
    r1, d, a1, a2 = _two_shell(cfg)
    return scaled_secular_raw(kappa, r1, d, a1, a2)


def secular_F(kappa, cfg: ShellConfig):
    """F_d(kappa); uses the split form beyond kappa*d = 30 (may overflow to inf)."""
    r1, d, a1, a2 = _two_shell(cfg)
    k = np.asarray(kappa, dtype=float)
    kd = k * d
    g = gamma1(k, r1, a1)
    with np.errstate(over="ignore"):
        direct = (g + a2 + k) * np.cosh(kd) + (k + g + a2 * g / k) * np.sinh(kd)
        split = 0.5 * (
            (k + g) * (2.0 * k + a2) / k * np.exp(kd) + a2 * (1.0 - g / k) * np.exp(-kd)
        )
    return _out(np.where(kd > SPLIT_FORM_KD, split, direct))


def matching_matrix(kappa: float, cfg: ShellConfig) -> np.ndarray:
    """Coefficient-matching matrix M(kappa; d) acting on (X(R1), Y(R1))."""
    r1, d, a1, a2 = _two_shell(cfg)
    kd = kappa * d
    if kd > 700.0:
        raise OverflowError("kappa*d > 700: use scaled_secular instead")
    g = float(gamma1(kappa, r1, a1))
    ch, sh = math.cosh(kd), math.sinh(kd)
    return np.array(
        [
            [-g, kappa],
            [(a2 + kappa) * ch + kappa * sh, (a2 + kappa) * sh + kappa * ch],
        ]
    )


@dataclass(frozen=True)
class SplitForm:
    f_inf: float
    g: float
    kappa: float
    d: float

    @property
    def scaled(self) -> float:
        """S = F_inf + G exp(-2 kappa d)."""
        return self.f_inf + self.g * math.exp(-2.0 * self.kappa * self.d)

    def secular(self) -> float:
        """F_d reassembled from the split; overflows for large kappa*d."""
        kd = self.kappa * self.d
        return 0.5 * (self.f_inf * math.exp(kd) + self.g * math.exp(-kd))


def split_form(kappa: float, cfg: ShellConfig) -> SplitForm:
    r1, d, a1, a2 = _two_shell(cfg)
    return SplitForm(
        float(f_inf(kappa, r1, a1, a2)), float(g_func(kappa, r1, a1, a2)), float(kappa), d
    )


def double_root_residual(kappa: float, cfg: ShellConfig) -> tuple[float, float]:
    """(F_d, dF_d/dkappa); both vanish at a multiple root."""
    r1, d, a1, a2 = _two_shell(cfg)
    k = float(kappa)
    g = float(gamma1(k, r1, a1))
    gp = float(gamma1_prime(k, r1))
    A = g + a2 + k
    B = k + g + a2 * g / k
    dA = gp + 1.0
    dB = 1.0 + gp + a2 * (gp / k - g / (k * k))
    kd = k * d
    c1, c2 = A, B
    e1, e2 = dA + d * B, dB + d * A
    if kd <= SPLIT_FORM_KD:
        ch, sh = math.cosh(kd), math.sinh(kd)
        return c1 * ch + c2 * sh, e1 * ch + e2 * sh
    ep, em = math.exp(kd), math.exp(-kd)
    return 0.5 * ((c1 + c2) * ep + (c1 - c2) * em), 0.5 * ((e1 + e2) * ep + (e1 - e2) * em)


# -- one-shell limits ---------------------------------------------------------


def inner_root(R1: float, alpha1: float) -> float | None:
    """Unique root of k + gamma1(k) when alpha1 < -1/R1, else None.

    k + gamma1(k) is strictly increasing and satisfies
    ``alpha1 + 2k <= k + gamma1 <= alpha1 + 1/R1 + 2k``, which brackets the root
    in ``[(-alpha1 - 1/R1)/2, -alpha1/2]``.
    """
    if not alpha1 < -1.0 / R1:
        return None

    def h(k):
        return alpha1 + float(x_coth(k * R1)) / R1 + k

    lo = 0.5 * (-alpha1 - 1.0 / R1)
    hi = -0.5 * alpha1
    if h(lo) >= 0.0:  # rounding at the very threshold
        return lo if lo > 0.0 else None
    return brentq(h, lo, hi, xtol=1e-300, rtol=4 * _EPS, maxiter=200)


@dataclass(frozen=True)
class OneShellRoots:
    kappa_in: float | None
    kappa_out: float | None
    outer_binds: bool


def one_shell_roots(cfg: ShellConfig) -> OneShellRoots:
    """Decoupled limits: inner root of k + gamma1 and kappa_out = -alpha2/2.

    ``outer_binds`` flags whether the outer shell alone binds (alpha2 < -1/R2).
    """
    r1, d, a1, a2 = _two_shell(cfg)
    k_out = -0.5 * a2 if a2 < 0.0 else None
    return OneShellRoots(inner_root(r1, a1), k_out, bool(a2 < -1.0 / (r1 + d)))


def large_d_correction(cfg: ShellConfig, which: str = "in") -> float:
    """Prefactor c in kappa(d) = kappa_* + c exp(-2 kappa_* d) + O(exp(-4 kappa_* d))."""
    r1, d, a1, a2 = _two_shell(cfg)
    roots = one_shell_roots(cfg)
    if which == "in":
        k = roots.kappa_in
    elif which == "out":
        k = roots.kappa_out
    else:
        raise ValueError("which must be 'in' or 'out'")
    if k is None:
        raise DegenerateRoot(f"no one-shell root '{which}' for this configuration")
    fp = float(f_inf_prime(k, r1, a1, a2))
    if abs(fp) < 1e-12:
        raise DegenerateRoot(
            f"F_inf'({k}) = {fp:.3e}: the one-shell levels coincide (tuned case)"
        )
    return -float(g_func(k, r1, a1, a2)) / fp


def tune_for_splitting(R1: float, alpha1: float) -> tuple[float, float]:
    """Return (kappa0, alpha2) so both one-shell levels sit at -kappa0^2."""
    k0 = inner_root(R1, alpha1)
    if k0 is None:
        raise NoInnerBoundState(
            f"alpha1={alpha1} >= -1/R1={-1.0 / R1}: the inner shell has no bound state"
        )
    return k0, -2.0 * k0


def splitting_constant(R1: float, alpha1: float, check_rtol: float = 1e-8) -> float:
    """C in kappa_pm(d) = kappa0 +/- C exp(-kappa0 d).

    Uses G(kappa0) = -4 kappa0 and F_inf''(kappa0) = 4 (1 + gamma1') / kappa0,
    i.e. ``C = kappa0 sqrt(2 / (1 + gamma1'(kappa0)))``, and checks it against a
    Richardson-extrapolated second difference of F_inf.
    """
    k0, a2 = tune_for_splitting(R1, alpha1)
    c_closed = k0 * math.sqrt(2.0 / (1.0 + float(gamma1_prime(k0, R1))))

    def second_difference(h):
        f = lambda k: float(f_inf(k, R1, alpha1, a2))  # noqa: E731
        return (f(k0 + h) - 2.0 * f(k0) + f(k0 - h)) / (h * h)

    h = 1e-3 * k0
    d2 = (4.0 * second_difference(h / 2) - second_difference(h)) / 3.0
    c_numeric = math.sqrt(-2.0 * float(g_func(k0, R1, alpha1, a2)) / d2)
    if abs(c_numeric / c_closed - 1.0) > check_rtol:
        raise CrossCheckFailed(
            f"splitting constant: closed form {c_closed!r} vs differenced {c_numeric!r}"
        )
    return c_closed
