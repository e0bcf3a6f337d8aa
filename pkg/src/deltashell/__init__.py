"""Bound states of -Laplacian plus concentric spherical delta shells.

Quick start::

    from deltashell import make_config, enumerate_spectrum
    spectrum = enumerate_spectrum(make_config([1.0, 2.0], [-3.0, -3.0]))
    for s in spectrum.states:
        print(s.ell, s.kappa.kappa, s.energy)
"""
from .boundary import m_matrix, secular_det, threshold_det, threshold_matrix
from .calibrate import classify_alignment, coupling_from_interface, reference_energy
from .kernels import BACKEND
from .model import BoundState, Channel, Kappa, ShellConfig, make_config, separation, validate_config
from .oracle import eigenfunction_samples, mismatch, propagate
from .secular import secular_F, split_form, splitting_constant, tune_for_splitting
from .solver import ScanPlan, Spectrum, enumerate_spectrum, find_channel_roots, splitting_curve

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BoundState",
    "Channel",
    "Kappa",
    "ScanPlan",
    "ShellConfig",
    "Spectrum",
    "classify_alignment",
    "coupling_from_interface",
    "eigenfunction_samples",
    "enumerate_spectrum",
    "find_channel_roots",
    "m_matrix",
    "make_config",
    "mismatch",
    "propagate",
    "reference_energy",
    "secular_F",
    "secular_det",
    "separation",
    "split_form",
    "splitting_constant",
    "splitting_curve",
    "threshold_det",
    "threshold_matrix",
    "tune_for_splitting",
    "validate_config",
]
