"""Hot-loop kernels with the backend chosen at import time.

The compiled ``_kernels`` extension is used when it was built; otherwise
the numpy implementation in ``_numpy_kernels`` is used.  Setting
``DELTASHELL_PURE_PYTHON=1`` forces the numpy path.
"""
from __future__ import annotations

import os
from types import ModuleType

from . import _numpy_kernels
from .errors import SingularWronskian

_compiled: ModuleType | None
try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

AVAILABLE = {"numpy": _numpy_kernels}
if _compiled is not None:
    AVAILABLE["cython"] = _compiled

if os.environ.get("DELTASHELL_PURE_PYTHON", "") not in ("", "0") or _compiled is None:
    BACKEND = "numpy"
else:
    BACKEND = "cython"

_impl = AVAILABLE[BACKEND]


def get(name: str | None = None) -> ModuleType:
    """Kernel module by name ("cython" or "numpy"); default is the active one."""
    if name is None:
        return _impl
    try:
        return AVAILABLE[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available") from None


def channel_det(radii, alphas, ell, kappas):
    return _impl.channel_det(radii, alphas, ell, kappas)


def mismatch(radii, alphas, ell, kappas):
    try:
        return _impl.mismatch(radii, alphas, ell, kappas)
    except ArithmeticError as exc:
        if isinstance(exc, SingularWronskian):
            raise
        raise SingularWronskian(str(exc)) from exc


def s_wave(R1, d, alpha1, alpha2, kappas):
    return _impl.s_wave(R1, d, alpha1, alpha2, kappas)
