"""Value records shared by every module.

All lengths are dimensionless and the kinetic term is -Laplacian
(hbar^2/2m = 1). Physical units only appear in :mod:`deltashell.calibrate`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    LengthMismatch,
    NonFiniteCoupling,
    NonIncreasingRadii,
    NonPositiveRadius,
    WrongShellCount,
)

MAX_SHELLS = 16


@dataclass(frozen=True)
class ShellConfig:
    """Radii R_1 < ... < R_N and constant couplings alpha_j of N delta shells."""

    radii: tuple[float, ...]
    alphas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))

    @property
    def n_shells(self) -> int:
        return len(self.radii)

    @classmethod
    def from_dict(cls, data: dict) -> "ShellConfig":
        try:
            radii = data["radii"]
            alphas = data["alphas"]
        except (KeyError, TypeError) as exc:
            raise LengthMismatch(f"config needs 'radii' and 'alphas' ({exc})") from None
        return validate_config(cls(tuple(radii), tuple(alphas)))

    def to_dict(self) -> dict:
        return {"radii": list(self.radii), "alphas": list(self.alphas)}

    def without_shell(self, index: int) -> "ShellConfig":
        keep = [i for i in range(self.n_shells) if i != index]
        return ShellConfig(
            tuple(self.radii[i] for i in keep), tuple(self.alphas[i] for i in keep)
        )

    def scaled(self, s: float) -> "ShellConfig":
        """Radii times s and couplings over s (the Schroedinger scaling)."""
        return ShellConfig(
            tuple(r * s for r in self.radii), tuple(a / s for a in self.alphas)
        )


@dataclass(frozen=True)
class Channel:
    ell: int

    def __post_init__(self):
        if int(self.ell) != self.ell or self.ell < 0:
            raise ValueError(f"angular momentum must be a nonnegative integer, got {self.ell}")
        object.__setattr__(self, "ell", int(self.ell))

    @property
    def degeneracy(self) -> int:
        return 2 * self.ell + 1


@dataclass(frozen=True)
class Kappa:
    """Decay rate kappa > 0 of a bound state with energy -kappa^2."""

    kappa: float

    def __post_init__(self):
        k = float(self.kappa)
        if not (k > 0.0 and math.isfinite(k)):
            raise ValueError(f"kappa must be positive and finite, got {self.kappa}")
        object.__setattr__(self, "kappa", k)

    @property
    def energy(self) -> float:
        return -self.kappa * self.kappa


@dataclass(frozen=True)
class BoundState:
    channel: Channel
    kappa: Kappa
    residual: float
    degeneracy: int = field(default=-1)
    oracle_verified: bool | None = None

    def __post_init__(self):
        if self.degeneracy == -1:
            object.__setattr__(self, "degeneracy", self.channel.degeneracy)
        if self.degeneracy != self.channel.degeneracy:
            raise ValueError("degeneracy must equal 2*ell + 1")
        if not self.residual >= 0.0:
            raise ValueError("residual must be nonnegative")

    @property
    def ell(self) -> int:
        return self.channel.ell

    @property
    def energy(self) -> float:
        return self.kappa.energy


def validate_config(cfg: ShellConfig) -> ShellConfig:
    """Return ``cfg`` unchanged if every ShellConfig invariant holds.

    Raises the matching :class:`~deltashell.errors.ConfigError` subclass,
    naming the offending index where there is one.
    """
    radii, alphas = cfg.radii, cfg.alphas
    if len(radii) != len(alphas):
        raise LengthMismatch(
            f"{len(radii)} radii but {len(alphas)} couplings"
        )
    if len(radii) == 0:
        raise WrongShellCount("at least one shell is required")
    if len(radii) > MAX_SHELLS:
        raise WrongShellCount(f"at most {MAX_SHELLS} shells are supported")
    for i, r in enumerate(radii):
        if not (math.isfinite(r) and r > 0.0):
            raise NonPositiveRadius(f"radius {i} must be finite and positive, got {r}", i)
    for i in range(1, len(radii)):
        if not radii[i] > radii[i - 1]:
            raise NonIncreasingRadii(
                f"radius {i} ({radii[i]}) does not exceed radius {i - 1} ({radii[i - 1]})", i
            )
    for i, a in enumerate(alphas):
        if not math.isfinite(a):
            raise NonFiniteCoupling(f"coupling {i} is not finite", i)
    return cfg


def make_config(radii: Sequence[float], alphas: Sequence[float]) -> ShellConfig:
    return validate_config(ShellConfig(tuple(radii), tuple(alphas)))


def separation(cfg: ShellConfig) -> float:
    """Gap d = R_2 - R_1 of a two-shell configuration."""
    if cfg.n_shells != 2:
        raise WrongShellCount(f"separation needs exactly 2 shells, got {cfg.n_shells}")
    return cfg.radii[1] - cfg.radii[0]
