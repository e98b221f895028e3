"""Exception types shared across the package.

The CLI maps these onto its exit-code contract, so user-facing entry
points catch the base classes rather than bare ValueError.
"""

from __future__ import annotations

__all__ = [
    "TunnelkitError",
    "DomainError",
    "StepError",
    "PhaseUnwrapError",
    "QuadratureError",
    "OpaqueBracketError",
    "DegenerateResonanceError",
    "ResonanceValidationError",
    "MassFitError",
    "DegenerateMatchingError",
]


class TunnelkitError(Exception):
    """Base class for every error raised by this package."""


class DomainError(TunnelkitError, ValueError):
    """Input outside the supported physical domain (e.g. E outside (0, U0))."""


class StepError(TunnelkitError, ValueError):
    """A finite-difference stencil would leave the valid energy interval."""


class PhaseUnwrapError(TunnelkitError):
    """Phase step exceeds pi/2; the differentiation step must be halved."""


class QuadratureError(TunnelkitError):
    """Adaptive quadrature hit its depth cap before converging.

    Carries the best partial estimate so callers can still inspect it.
    """

    def __init__(self, message: str, partial: float):
        super().__init__(message)
        self.partial = partial


class OpaqueBracketError(TunnelkitError):
    """Opaque-barrier asymptotic bracket is non-positive.

    Signals proximity to a resonance, where the asymptotic expansion of
    the transmission or of the phase-time is meaningless.
    """


class DegenerateResonanceError(TunnelkitError):
    """Half-width bracket came out non-positive for a claimed resonance."""


class ResonanceValidationError(TunnelkitError):
    """A candidate resonance failed the full-transparency certification.

    Usually means the scan grid is too coarse or the resonance is too
    narrow to resolve in double precision.
    """


class MassFitError(TunnelkitError):
    """Mass bracket does not enclose a sign change of the residual."""


class DegenerateMatchingError(TunnelkitError):
    """Energy coincides with a segment height; plane-wave matching breaks."""
