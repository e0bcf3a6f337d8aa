"""Physical units for core-shell quantum dots.

A thin band-offset step of height ``delta_v`` (eV) and width ``w`` (nm) is
replaced by a surface interaction of dimensionless strength
``alpha = (delta_v / E0) * (w / L0)`` with ``E0 = hbar^2 / (2 m* L0^2)``.
Everything downstream works in units of L0 and E0.  The results are
order-of-magnitude estimates, not fits.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .model import ShellConfig, make_config

# hbar^2 / (2 m_e * (1 nm)^2) in eV, from CODATA 2018 (hbar c = 197.3269804 eV nm,
# m_e c^2 = 510998.95 eV), rounded to six significant digits.
HBAR2_OVER_2ME_NM2_EV = 0.0380998


@dataclass(frozen=True)
class CalibrationInput:
    delta_v: float
    width: float
    mass_ratio: float
    l0: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.delta_v):
            raise ValueError("delta_v must be finite")
        for name in ("width", "mass_ratio", "l0"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive, got {v}")


def reference_energy(mass_ratio: float, l0: float = 1.0) -> float:
    """E0 = hbar^2 / (2 m* L0^2) in eV for L0 in nm."""
    if not (mass_ratio > 0 and l0 > 0):
        raise ValueError("mass_ratio and l0 must be positive")
    return HBAR2_OVER_2ME_NM2_EV / (mass_ratio * l0 * l0)


def coupling_from_interface(inp: CalibrationInput) -> float:
    return (inp.delta_v / reference_energy(inp.mass_ratio, inp.l0)) * (inp.width / inp.l0)


class Alignment(str, enum.Enum):
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"
    OTHER = "Other"


def classify_alignment(alpha1: float, alpha2: float) -> Alignment:
    """Attractive core with a barrier outside is Type I; the reverse is Type II."""
    if alpha1 < 0 < alpha2:
        return Alignment.TYPE_I
    if alpha1 > 0 > alpha2:
        return Alignment.TYPE_II
    return Alignment.OTHER


def energy_to_ev(energy: float, e0: float) -> float:
    """Dimensionless energy (units of E0) to eV."""
    return energy * e0


def confinement_scale(kappa: float, e0: float) -> float:
    """Binding energy kappa^2 E0 in eV."""
    return kappa * kappa * e0


@dataclass(frozen=True)
class Preset:
    name: str
    radii_nm: tuple[float, float]
    alpha1: float
    outer: CalibrationInput

    def config(self) -> ShellConfig:
        al2 = coupling_from_interface(self.outer)
        l0 = self.outer.l0
        return make_config([r / l0 for r in self.radii_nm], [self.alpha1, al2])


# The inner coupling is a representative O(1) value; the outer one comes from the
# interface data through coupling_from_interface.
PRESETS = {
    "type1-cdse-zns": Preset("type1-cdse-zns", (2.5, 3.5), -2.5, CalibrationInput(0.7, 0.3, 0.13)),
    "type2-cdte-cdse": Preset("type2-cdte-cdse", (2.5, 3.5), 2.5, CalibrationInput(-0.8, 0.35, 0.11)),
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


@dataclass(frozen=True)
class Calibration:
    e0_ev: float
    alphas: tuple[float, ...]
    classification: Alignment
    config: ShellConfig | None
    l0_nm: float


def calibrate_preset(name: str) -> Calibration:
    p = get_preset(name)
    cfg = p.config()
    return Calibration(
        reference_energy(p.outer.mass_ratio, p.outer.l0),
        cfg.alphas,
        classify_alignment(*cfg.alphas),
        cfg,
        p.outer.l0,
    )
