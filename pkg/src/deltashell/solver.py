"""Bound-state search: per-channel root finding and full spectrum assembly.

A channel function is sampled on a geometric kappa grid, every sign
change is refined with Brent's method, and local minima of |f| that do
not change sign are re-examined for hidden root pairs.  Channels are
scanned in increasing ell until one comes back empty.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import kernels
from .errors import (
    CrossCheckFailed,
    EllMaxReached,
    GridTooCoarse,
    InvalidPlan,
    RootsNotResolved,
    SpectrumInvariantError,
)
from .model import BoundState, Channel, Kappa, ShellConfig, validate_config
from .oracle import oracle_root
from .secular import double_root_residual, splitting_constant, tune_for_splitting
from .specfun import ELL_MAX

_EPS = np.finfo(float).eps
RESIDUAL_TOL = 1e-9
ORACLE_RTOL = 1e-9
TANGENCY_TOL = 1e-6


@dataclass(frozen=True)
class ScanPlan:
    kappa_min: float = 1e-6
    kappa_max: float | None = None
    grid_points: int = 2000
    ell_max: int = 32
    tol: float = 1e-12

    def __post_init__(self):
        if not (self.kappa_min > 0 and math.isfinite(self.kappa_min)):
            raise InvalidPlan("kappa_min must be positive")
        if self.kappa_max is not None and not (
            math.isfinite(self.kappa_max) and self.kappa_max > self.kappa_min
        ):
            raise InvalidPlan("kappa_max must exceed kappa_min")
        if int(self.grid_points) != self.grid_points or self.grid_points < 16:
            raise InvalidPlan("grid_points must be an integer >= 16")
        if int(self.ell_max) != self.ell_max or not 0 <= self.ell_max <= ELL_MAX:
            raise InvalidPlan(f"ell_max must be an integer in [0, {ELL_MAX}]")
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise InvalidPlan("tol must be positive")

    def resolved_kappa_max(self, cfg: ShellConfig) -> float:
        if self.kappa_max is not None:
            return float(self.kappa_max)
        return max(kappa_upper_bound(cfg) + 1.0, 2.0 * self.kappa_min)

    def grid(self, cfg: ShellConfig) -> np.ndarray:
        return np.geomspace(self.kappa_min, self.resolved_kappa_max(cfg), int(self.grid_points))


def kappa_upper_bound(cfg: ShellConfig) -> float:
    """No bound state has kappa above half the total attractive coupling.

    From ``u(R)^2 <= ||u|| ||u'||`` on the half line, the radial form is at
    least ``||u'||^2 - A ||u|| ||u'|| >= -(A/2)^2 ||u||^2`` with
    ``A = sum max(-alpha_j, 0)``.
    """
    return 0.5 * sum(max(-a, 0.0) for a in cfg.alphas)


# -- channel functions ----------------------------------------------------------


def channel_function(cfg: ShellConfig, ell: int, method: str = "auto") -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized secular function of one channel.

    ``auto`` picks the scaled two-shell function S for N = 2, ell = 0 and the
    boundary determinant otherwise; ``det``, ``secular`` and ``mismatch``
    force a particular one.
    """
    validate_config(cfg)
    if method == "auto":
        method = "secular" if cfg.n_shells == 2 and ell == 0 else "det"
    R, al = cfg.radii, cfg.alphas
    if method == "det":
        return lambda k: kernels.channel_det(R, al, ell, k)
    if method == "mismatch":
        return lambda k: kernels.mismatch(R, al, ell, k)
    if method == "secular":
        if cfg.n_shells != 2 or ell != 0:
            raise ValueError("the scaled secular function exists only for two shells, ell = 0")
        r1, d = R[0], R[1] - R[0]
        return lambda k: kernels.s_wave(r1, d, al[0], al[1], k)
    raise ValueError(f"unknown channel function {method!r}")


@dataclass(frozen=True)
class DoubleRootCandidate:
    kappa: float
    value: float
    residual_pair: tuple[float, float] | None


@dataclass(frozen=True)
class ChannelScan:
    ell: int
    roots: tuple[float, ...]
    residuals: tuple[float, ...]
    candidates: tuple[DoubleRootCandidate, ...] = ()
    notes: tuple[str, ...] = ()


def _scalar(func):
    return lambda k: float(func(np.array([k]))[0])


def _brent(f, a, b, fa, fb, tol):
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    return brentq(f, a, b, xtol=tol, rtol=4 * _EPS, maxiter=300)


def roots_on_grid(func, nodes: np.ndarray, tol: float) -> tuple[list[float], list[tuple[float, float]], list[str]]:
    """Roots of ``func`` from sign changes on ``nodes`` plus hidden pairs.

    Returns (roots, tangencies, notes); ``tangencies`` lists (kappa, f) for
    local extrema that come within TANGENCY_TOL of zero without crossing.
    """
    nodes = np.asarray(nodes, dtype=float)
    vals = np.asarray(func(nodes), dtype=float)
    f = _scalar(func)
    roots: list[float] = []
    tangencies: list[tuple[float, float]] = []
    notes: list[str] = []
    sgn = np.sign(vals)
    for i in np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]:
        roots.append(_brent(f, nodes[i], nodes[i + 1], vals[i], vals[i + 1], tol))
    for i in np.nonzero(vals == 0.0)[0]:
        roots.append(float(nodes[i]))

    # local minima of |f| whose neighbourhood keeps one sign
    mag = np.abs(vals)
    for i in range(1, nodes.size - 1):
        if not (mag[i] < mag[i - 1] and mag[i] < mag[i + 1]):
            continue
        if vals[i] == 0.0 or sgn[i - 1] != sgn[i] or sgn[i + 1] != sgn[i]:
            continue
        s = sgn[i]
        lo, hi = nodes[i - 1], nodes[i + 1]
        fine = np.linspace(lo, hi, 9)  # 4x the local resolution
        fv = np.asarray(func(fine), dtype=float)
        j = int(np.argmin(s * fv))
        a, b = fine[max(j - 1, 0)], fine[min(j + 1, fine.size - 1)]
        res = minimize_scalar(lambda k: s * f(k), bounds=(a, b), method="bounded",
                              options={"xatol": max(tol, 1e-14 * b)})
        km, fm = float(res.x), s * float(res.fun)
        if fv[j] * s < s * fm:
            km, fm = float(fine[j]), float(fv[j])
        if fm == 0.0:
            roots.append(km)
            continue
        if np.sign(fm) != s:
            notes.append(f"two roots share the grid cell around kappa={km:.6g}; refined")
            roots.append(_brent(f, lo, km, vals[i - 1], fm, tol))
            roots.append(_brent(f, km, hi, fm, vals[i + 1], tol))
        elif abs(fm) < TANGENCY_TOL:
            tangencies.append((km, fm))
    roots.sort()
    merged: list[float] = []
    for r in roots:
        if merged and abs(r - merged[-1]) <= 10 * tol:
            continue
        merged.append(float(r))
    return merged, tangencies, notes


def scan_channel(
    cfg: ShellConfig,
    ell: int,
    plan: ScanPlan | None = None,
    method: str = "auto",
    extra_nodes: Sequence[float] = (),
    nodes: np.ndarray | None = None,
) -> ChannelScan:
    plan = plan or ScanPlan()
    validate_config(cfg)
    if int(ell) != ell or not 0 <= ell <= ELL_MAX:
        raise InvalidPlan(f"ell must be an integer in [0, {ELL_MAX}]")
    ell = int(ell)
    func = channel_function(cfg, ell, method)
    grid = plan.grid(cfg) if nodes is None else np.asarray(nodes, dtype=float)
    if len(extra_nodes):
        grid = np.unique(np.concatenate([grid, np.asarray(extra_nodes, dtype=float)]))
    roots, tang, notes = roots_on_grid(func, grid, plan.tol)
    resid = tuple(abs(float(func(np.array([r]))[0])) for r in roots)
    cands = []
    for km, fm in tang:
        pair = None
        if cfg.n_shells == 2 and ell == 0:
            pair = double_root_residual(km, cfg)
        cands.append(DoubleRootCandidate(km, fm, pair))
    for n in notes:
        warnings.warn(n, GridTooCoarse, stacklevel=2)
    return ChannelScan(ell, tuple(roots), resid, tuple(cands), tuple(notes))


def find_channel_roots(cfg: ShellConfig, ell: int, plan: ScanPlan | None = None, method: str = "auto") -> list[Kappa]:
    return [Kappa(k) for k in scan_channel(cfg, ell, plan, method).roots]


# -- oracle cross-check ---------------------------------------------------------------


def verify_root(cfg: ShellConfig, ell: int, kappa: float, rtol: float = ORACLE_RTOL) -> float:
    k_or = oracle_root(cfg, ell, kappa)
    if abs(k_or - kappa) > rtol * kappa:
        raise CrossCheckFailed(
            f"determinant root {kappa!r} and oracle root {k_or!r} differ (ell={ell})"
        )
    return k_or


# -- spectrum ----------------------------------------------------------------------


@dataclass(frozen=True)
class Spectrum:
    states: tuple[BoundState, ...]
    per_channel_counts: tuple[tuple[int, int], ...]
    ell_max_reached: bool = False
    candidates: tuple[tuple[int, DoubleRootCandidate], ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def ground_state(self) -> BoundState | None:
        return self.states[0] if self.states else None

    def count(self, ell: int) -> int:
        return dict(self.per_channel_counts).get(ell, 0)


def check_invariants(cfg: ShellConfig, spec: Spectrum) -> None:
    counts = [c for _, c in spec.per_channel_counts]
    if cfg.n_shells == 2 and counts and counts[0] > 2:
        raise SpectrumInvariantError(f"{counts[0]} s-wave roots for two shells (at most 2 allowed)")
    for ell, c in spec.per_channel_counts:
        if c > cfg.n_shells:
            raise SpectrumInvariantError(f"{c} roots in channel {ell} exceed the shell count {cfg.n_shells}")
    for (l1, c1), (l2, c2) in zip(spec.per_channel_counts, spec.per_channel_counts[1:]):
        if c2 > c1:
            raise SpectrumInvariantError(f"channel {l2} has {c2} roots but channel {l1} only {c1}")
    if spec.states and spec.states[0].ell != 0:
        raise SpectrumInvariantError(f"ground state found in channel {spec.states[0].ell}, not the s-wave")


def enumerate_spectrum(
    cfg: ShellConfig,
    plan: ScanPlan | None = None,
    verify: bool = True,
    threads: int = 1,
    check: bool = True,
    stop_at_empty: bool = True,
) -> Spectrum:
    """All negative eigenvalues, channel by channel.

    Scanning stops at the first channel with no roots; ``ell_max_reached`` is
    set (with an EllMaxReached warning) if that never happens.
    """
    plan = plan or ScanPlan()
    validate_config(cfg)
    threads = max(int(threads), 1)
    scans: list[ChannelScan] = []
    stopped = False
    ell = 0
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        while ell <= plan.ell_max and not stopped:
            batch = list(range(ell, min(ell + threads, plan.ell_max + 1)))
            if pool is None:
                results = [scan_channel(cfg, l, plan) for l in batch]
            else:
                results = list(pool.map(lambda l: scan_channel(cfg, l, plan), batch))
            for res in results:
                scans.append(res)
                if stop_at_empty and not res.roots:
                    stopped = True
                    break
            ell = batch[-1] + 1
    finally:
        if pool is not None:
            pool.shutdown()

    states = []
    cands = []
    notes = []
    for sc in scans:
        for k, r in zip(sc.roots, sc.residuals):
            ok = None
            if verify:
                verify_root(cfg, sc.ell, k)
                ok = True
            states.append(BoundState(Channel(sc.ell), Kappa(k), r, oracle_verified=ok))
        cands.extend((sc.ell, c) for c in sc.candidates)
        notes.extend(sc.notes)
    states.sort(key=lambda s: (s.energy, s.ell))
    reached = stop_at_empty and not stopped
    if reached:
        msg = f"channels up to ell_max={plan.ell_max} all bind; the spectrum may be truncated"
        notes.append(msg)
        warnings.warn(msg, EllMaxReached, stacklevel=2)
    out = Spectrum(
        tuple(states),
        tuple((sc.ell, len(sc.roots)) for sc in scans),
        reached,
        tuple(cands),
        tuple(notes),
    )
    if check:
        check_invariants(cfg, out)
    return out


# -- tunneling splitting -------------------------------------------------------------------


@dataclass(frozen=True)
class SplittingRow:
    d: float
    kappa_plus: float
    kappa_minus: float
    gap: float
    predicted_gap: float

    @property
    def ratio(self) -> float:
        return self.gap / self.predicted_gap

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.kappa_plus + self.kappa_minus)


@dataclass(frozen=True)
class SplittingReport:
    R1: float
    alpha1: float
    kappa0: float
    alpha2_tuned: float
    c_const: float
    rows: tuple[SplittingRow, ...]
    fitted_slope: float
    fitted_intercept: float
    d_cutoff: float | None = None

    @property
    def fitted_exponent(self) -> float:
        return -self.fitted_slope


def agmon_distance(kappa0: float, R1: float, R2: float) -> float:
    if not (kappa0 > 0 and R1 > 0 and R2 > R1):
        raise ValueError("need kappa0 > 0 and 0 < R1 < R2")
    return kappa0 * (R2 - R1)


MIN_SPLITTING_ROWS = 4


def splitting_pair(R1: float, alpha1: float, d: float, kappa0: float, alpha2: float, window: float,
                   plan: ScanPlan) -> tuple[float, float] | None:
    """The two s-wave roots around kappa0, or None if they cannot be separated."""
    cfg = ShellConfig((R1, R1 + d), (alpha1, alpha2))
    lo, hi = max(kappa0 - window, plan.kappa_min), kappa0 + window
    nodes = np.linspace(lo, hi, int(plan.grid_points))
    sc = scan_channel(cfg, 0, plan, "secular", extra_nodes=[kappa0], nodes=nodes)
    below = [k for k in sc.roots if k < kappa0]
    above = [k for k in sc.roots if k > kappa0]
    if len(sc.roots) != 2 or len(below) != 1 or len(above) != 1:
        return None
    return above[0], below[0]


def splitting_curve(R1: float, alpha1: float, d_grid: Sequence[float], plan: ScanPlan | None = None) -> SplittingReport:
    """Gap of the tuned s-wave pair over ``d_grid`` against 4 kappa0 C exp(-kappa0 d)."""
    plan = plan or ScanPlan()
    d_grid = [float(d) for d in d_grid]
    if not d_grid or any(d <= 0 for d in d_grid) or any(b <= a for a, b in zip(d_grid, d_grid[1:])):
        raise InvalidPlan("d_grid must be positive and strictly increasing")
    k0, a2 = tune_for_splitting(R1, alpha1)
    c = splitting_constant(R1, alpha1)
    window = 10.0 * c * math.exp(-k0 * d_grid[0])
    rows = []
    cutoff = None
    for d in d_grid:
        pair = splitting_pair(R1, alpha1, d, k0, a2, window, plan)
        if pair is None:
            cutoff = d
            break
        kp, km = pair
        gap = abs(kp * kp - km * km)
        rows.append(SplittingRow(d, kp, km, gap, 4.0 * k0 * c * math.exp(-k0 * d)))
    if len(rows) < MIN_SPLITTING_ROWS:
        raise RootsNotResolved(
            f"only {len(rows)} separations resolved before d={cutoff}", d_cutoff=cutoff
        )
    ds = np.array([r.d for r in rows])
    lg = np.log([r.gap for r in rows])
    slope, intercept = np.polyfit(ds, lg, 1)
    return SplittingReport(R1, alpha1, k0, a2, c, tuple(rows), float(slope), float(intercept), cutoff)
