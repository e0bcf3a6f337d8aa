"""Exception and warning types raised across the package."""
from __future__ import annotations


class DeltaShellError(Exception):
    """Base class for all package errors."""

    code = "DeltaShellError"

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self)}


# -- configuration errors (CLI exit 2) ---------------------------------------


class ConfigError(DeltaShellError, ValueError):
    code = "ConfigError"

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index

    def to_dict(self) -> dict:
        out = super().to_dict()
        if self.index is not None:
            out["index"] = self.index
        return out


class NonIncreasingRadii(ConfigError):
    code = "NonIncreasingRadii"


class NonPositiveRadius(ConfigError):
    code = "NonPositiveRadius"


class LengthMismatch(ConfigError):
    code = "LengthMismatch"


class NonFiniteCoupling(ConfigError):
    code = "NonFiniteCoupling"


class WrongShellCount(ConfigError):
    code = "WrongShellCount"


class UnsupportedOrder(ConfigError):
    code = "UnsupportedOrder"


class InvalidPlan(ConfigError):
    code = "InvalidPlan"


# -- domain preconditions (CLI exit 3) ---------------------------------------


class DomainError(DeltaShellError, ValueError):
    code = "DomainError"


class NoInnerBoundState(DomainError):
    """The inner shell alone does not bind (alpha1 >= -1/R1)."""

    code = "NoInnerBoundState"


class SWaveThresholdForbidden(DomainError):
    """E = 0 is never an s-wave L2 eigenvalue, so A_0 is not defined."""

    code = "SWaveThresholdForbidden"


class DegenerateRoot(DomainError):
    code = "DegenerateRoot"


# -- numerical failures (CLI exit 4) -----------------------------------------


class NumericalError(DeltaShellError, ArithmeticError):
    code = "NumericalError"


class RootsNotResolved(NumericalError):
    code = "RootsNotResolved"

    def __init__(self, message: str, d_cutoff: float | None = None):
        super().__init__(message)
        self.d_cutoff = d_cutoff


class SingularWronskian(NumericalError):
    code = "SingularWronskian"


class NotARoot(NumericalError):
    code = "NotARoot"


class SpectrumInvariantError(NumericalError):
    """A counting invariant was violated by the computed spectrum."""

    code = "SpectrumInvariantError"


class CrossCheckFailed(NumericalError):
    code = "CrossCheckFailed"


# -- warnings ----------------------------------------------------------------


class GridTooCoarse(UserWarning):
    """A grid cell may hide a pair of roots."""


class EllMaxReached(UserWarning):
    """Channel enumeration hit ell_max before an empty channel."""
