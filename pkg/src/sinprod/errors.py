"""Exception types shared across the package."""

from __future__ import annotations


class SinprodError(Exception):
    """Base class for all package-specific errors."""


class AngleParseError(SinprodError):
    """An angle spec string could not be parsed; carries the offending position."""

    def __init__(self, spec: str, position: int, reason: str):
        self.spec = spec
        self.position = position
        self.reason = reason
        super().__init__(f"cannot parse angle spec {spec!r} at position {position}: {reason}")


class DepthExceedsPrecision(SinprodError):
    """Argument reduction was requested beyond a raw angle's reliable depth."""

    def __init__(self, depth: int, max_reliable_depth: int):
        self.depth = depth
        self.max_reliable_depth = max_reliable_depth
        super().__init__(
            f"depth {depth} exceeds the reliable reduction depth {max_reliable_depth} "
            "of this raw-valued angle"
        )


class DepthTooLarge(SinprodError):
    """Quadrature level outside the supported 64-bit-safe range."""


class DegenerateFit(SinprodError):
    """Extrapolation fit was requested on too few rows or a singular system."""


class InsufficientData(SinprodError):
    """A diagnostic needs more rows than were supplied."""


class InvalidSampleCount(SinprodError):
    """A Monte Carlo estimate was requested with no samples."""


class CertificateUnavailable(SinprodError):
    """Strict-mode witness construction could not certify a lower bound."""


class ZeroFactor(SinprodError):
    """A bound that divides by |sin(2^n x)| was evaluated where the sine vanishes."""
