"""Modified spherical Bessel functions and the negative-energy Green factor.

Conventions: ``i_0(x) = sinh(x)/x`` and ``k_0(x) = exp(-x)/x`` (no pi/2),
both obeying ``f_{l+1} = f_{l-1} -/+ (2l+1) f_l / x``.  With these,
``kappa * i_l(kappa r<) * k_l(kappa r>)`` equals ``i k j_l(k r<) h1_l(k r>)``
at ``k = i kappa``.

Everything is built from two ratio sequences that never overflow:

* ``rho_k(x) = i_k(x) / i_{k-1}(x)``, from Miller's backward recurrence
  written as a continued fraction (upward recurrence for ``i`` is unstable);
* ``s_k(x) = k_k(x) / k_{k-1}(x)``, from the upward recurrence (stable).

Functions accept scalars or numpy arrays in ``x``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedOrder

ELL_MAX = 64
COTH_SERIES_CUTOFF = 1e-4


def _check_ell(ell: int, ell_max: int = ELL_MAX) -> int:
    if int(ell) != ell or ell < 0:
        raise UnsupportedOrder(f"order must be a nonnegative integer, got {ell}")
    if ell > ell_max:
        raise UnsupportedOrder(f"order {ell} exceeds ell_max={ell_max}")
    return int(ell)


def cf_start(ell: int, xmax: float) -> int:
    """Starting index of the backward ratio recurrence for ``x <= xmax``."""
    return int(ell) + 8 + int(math.sqrt(40.0 * float(xmax)))


def coth_stable(x):
    """coth(x) for x > 0, free of overflow and of small-x cancellation."""
    x = np.asarray(x, dtype=float)
    small = x < COTH_SERIES_CUTOFF
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        big = 1.0 + 2.0 / np.expm1(2.0 * x)
        series = 1.0 / x + x / 3.0 - x**3 / 45.0
    out = np.where(small, series, big)
    return out[()] if out.ndim == 0 else out


def x_coth(x):
    """x * coth(x), tending to 1 as x -> 0."""
    x = np.asarray(x, dtype=float)
    small = x < COTH_SERIES_CUTOFF
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        big = x + 2.0 * x / np.expm1(2.0 * x)
        series = 1.0 + x * x / 3.0 - x**4 / 45.0
    out = np.where(small, series, big)
    return out[()] if out.ndim == 0 else out


def i0_scaled(x):
    """exp(-x) * i_0(x) = (1 - exp(-2x)) / (2x)."""
    x = np.asarray(x, dtype=float)
    return -np.expm1(-2.0 * x) / (2.0 * x)


def i_ratios(ell: int, x) -> np.ndarray:
    """Array ``out[k-1] = i_k(x)/i_{k-1}(x)`` for ``k = 1..max(ell, 1)``."""
    x = np.asarray(x, dtype=float)
    top = max(int(ell), 1)
    start = cf_start(top, float(np.max(x)) if x.size else 0.0)
    # Amos-type estimate of the ratio at the starting index
    r = x / (start + np.sqrt((start + 1.0) ** 2 + x * x))
    out = np.empty((top,) + x.shape)
    for k in range(start, 0, -1):
        r = 1.0 / ((2 * k + 1) / x + r)
        if k <= top:
            out[k - 1] = r
    return out


def k_ratios(ell: int, x) -> np.ndarray:
    """Array ``out[k-1] = k_k(x)/k_{k-1}(x)`` for ``k = 1..max(ell, 1)``."""
    x = np.asarray(x, dtype=float)
    top = max(int(ell), 1)
    out = np.empty((top,) + x.shape)
    s = 1.0 + 1.0 / x
    out[0] = s
    for k in range(1, top):
        s = 1.0 / s + (2 * k + 1) / x
        out[k] = s
    return out


def sph_i_scaled(ell: int, x):
    """exp(-x) * i_ell(x)."""
    ell = _check_ell(ell)
    x = np.asarray(x, dtype=float)
    val = i0_scaled(x)
    if ell:
        val = val * np.prod(i_ratios(ell, x)[:ell], axis=0)
    return val


def sph_k_scaled(ell: int, x):
    """exp(x) * k_ell(x)."""
    ell = _check_ell(ell)
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        val = 1.0 / x
        if ell:
            val = val * np.prod(k_ratios(ell, x)[:ell], axis=0)
    return val


def sph_i(ell: int, x: float, ell_max: int = ELL_MAX) -> float:
    """Modified spherical Bessel function of the first kind, i_0 = sinh(x)/x."""
    ell = _check_ell(ell, ell_max)
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"x must be positive, got {x}")
    scaled = float(sph_i_scaled(ell, x))
    if scaled == 0.0:
        return 0.0
    if x + math.log(scaled) > 709.0:
        raise OverflowError(f"i_{ell}({x}) exceeds the double range")
    return scaled * math.exp(x)


def sph_k(ell: int, x: float, ell_max: int = ELL_MAX) -> float:
    """Modified spherical Bessel function of the second kind, k_0 = exp(-x)/x."""
    ell = _check_ell(ell, ell_max)
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"x must be positive, got {x}")
    if x > 745.0:
        return 0.0
    scaled = float(sph_k_scaled(ell, x))
    if not math.isfinite(scaled):
        raise OverflowError(f"k_{ell}({x}) exceeds the double range")
    if x < 700.0:
        return scaled * math.exp(-x)
    return math.exp(math.log(scaled) - x)


def log_derivative_i(ell: int, x):
    """i_ell'(x) / i_ell(x)."""
    x = np.asarray(x, dtype=float)
    rho = i_ratios(ell, x)
    if ell == 0:
        return rho[0]
    return 1.0 / rho[ell - 1] - (ell + 1) / x


def log_derivative_k(ell: int, x):
    """k_ell'(x) / k_ell(x)."""
    x = np.asarray(x, dtype=float)
    s = k_ratios(ell, x)
    if ell == 0:
        return -s[0]
    return -1.0 / s[ell - 1] - (ell + 1) / x


def green_values(ell: int, kappa, a, b):
    """Vectorized ``kappa * i_ell(kappa r<) * k_ell(kappa r>)``.

    Written as ``[kappa i_0 k_0] * prod_k rho_k(kappa r<) s_k(kappa r>)``
    times ``exp(-kappa (r> - r<))``; each paired factor stays below one
    for small arguments, so nothing overflows for any supported order.
    """
    ell = _check_ell(ell)
    kappa = np.asarray(kappa, dtype=float)
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    xa = kappa * lo
    xb = kappa * hi
    val = -np.expm1(-2.0 * xa) / (2.0 * kappa * lo * hi)
    if ell:
        val = val * np.prod(i_ratios(ell, xa)[:ell] * k_ratios(ell, xb)[:ell], axis=0)
    return val * np.exp(-kappa * (hi - lo))


@dataclass(frozen=True)
class GreenFactor:
    ell: int
    kappa: float
    r_small: float
    r_large: float
    value: float


def green_factor(ell: int, kappa: float, a: float, b: float) -> GreenFactor:
    """Radial single-layer factor ``i k j_l(k r<) h1_l(k r>)`` at ``k = i kappa``."""
    if not (kappa > 0 and a > 0 and b > 0):
        raise ValueError("kappa and both radii must be positive")
    lo, hi = (a, b) if a <= b else (b, a)
    value = float(green_values(ell, kappa, lo, hi))
    return GreenFactor(int(ell), float(kappa), float(lo), float(hi), value)
