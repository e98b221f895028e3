"""Brute-force scattering engine for piecewise-constant 1D potentials.

Standard 2x2 transfer-matrix assembly: plane-wave (or real-exponential)
solutions in each constant segment, psi and psi' matched at every
interface. This is the independent reference the closed-form modules are
certified against, so it deliberately shares no hyperbolic code with them
and pulls hbar straight from the constants module.

Conventions. Segments start at x = 0 and the potential vanishes outside
them. The incident wave is exp(ikx) from the left; the transmitted wave is
written t * exp(ikx) with the same origin, so for an empty profile t = 1
and for the double barrier t is directly comparable to the closed-form
amplitude.

Scaling. An evanescent segment of thickness d multiplies coefficients by
exp(+-qd). The growing exponential is factored out as a scalar held in log
space (matrix entries stay O(1)), which keeps qa ~ 700 overflow-free. The
chain of interface matrices telescopes to determinant one for equal outer
media; the transmitted amplitude uses that identity rather than the
numerically cancellation-prone computed determinant.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

from .constants import CODATA2018, PhysicalConstants
from .errors import DegenerateMatchingError, DomainError

__all__ = [
    "PotentialProfile",
    "ScatterSolution",
    "TransferMatrix",
    "double_barrier_profile",
    "transfer_matrix",
    "solve",
]


@dataclass(frozen=True)
class PotentialProfile:
    """Ordered constant-potential segments (width m, height J) plus the mass."""

    segments: tuple[tuple[float, float], ...]
    m: float

    def __post_init__(self) -> None:
        if not self.m > 0.0:
            raise DomainError(f"mass must be > 0, got {self.m}")
        for width, _height in self.segments:
            if not width > 0.0:
                raise DomainError(f"segment widths must be > 0, got {width}")

    @property
    def total_width(self) -> float:
        return sum(width for width, _ in self.segments)


@dataclass(frozen=True)
class ScatterSolution:
    t: complex
    r: complex

    @property
    def transmission(self) -> float:
        return abs(self.t) ** 2

    @property
    def reflection(self) -> float:
        return abs(self.r) ** 2


@dataclass(frozen=True)
class TransferMatrix:
    """2x2 complex matrix with an exp(log_scale) scalar factored out."""

    m11: complex
    m12: complex
    m21: complex
    m22: complex
    log_scale: float

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        out = TransferMatrix(
            m11=self.m11 * other.m11 + self.m12 * other.m21,
            m12=self.m11 * other.m12 + self.m12 * other.m22,
            m21=self.m21 * other.m11 + self.m22 * other.m21,
            m22=self.m21 * other.m12 + self.m22 * other.m22,
            log_scale=self.log_scale + other.log_scale,
        )
        return out._normalized()

    def _normalized(self) -> "TransferMatrix":
        mag = max(abs(self.m11), abs(self.m12), abs(self.m21), abs(self.m22))
        if mag == 0.0 or 1e-50 < mag < 1e50:
            return self
        inv = 1.0 / mag
        return TransferMatrix(
            self.m11 * inv,
            self.m12 * inv,
            self.m21 * inv,
            self.m22 * inv,
            self.log_scale + math.log(mag),
        )

    @staticmethod
    def identity() -> "TransferMatrix":
        return TransferMatrix(1.0 + 0j, 0j, 0j, 1.0 + 0j, 0.0)


def double_barrier_profile(sys) -> PotentialProfile:
    """Profile [(a, U0), (L, 0), (a, U0)] with origin at the first barrier edge.

    A zero gap degenerates into the single merged barrier [(2a, U0)].
    """
    if sys.L == 0.0:
        return PotentialProfile(segments=((2.0 * sys.a, sys.U0),), m=sys.m)
    return PotentialProfile(
        segments=((sys.a, sys.U0), (sys.L, 0.0), (sys.a, sys.U0)), m=sys.m
    )


def _interface(kappa_from: complex, kappa_to: complex) -> TransferMatrix:
    # psi, psi' continuity: coefficient map with rho = kappa_from / kappa_to.
    rho = kappa_from / kappa_to
    return TransferMatrix(
        0.5 * (1.0 + rho), 0.5 * (1.0 - rho), 0.5 * (1.0 - rho), 0.5 * (1.0 + rho), 0.0
    )


def _segment_kappa(E: float, height: float, m: float, hbar: float) -> complex:
    """Local wavenumber; imaginary for evanescent segments."""
    if abs(E - height) <= 1e-12 * max(E, abs(height)):
        raise DegenerateMatchingError(
            f"energy {E} J coincides with segment height {height} J; "
            "perturb E to restore plane-wave matching"
        )
    if E > height:
        return complex(math.sqrt(2.0 * m * (E - height)) / hbar, 0.0)
    return complex(0.0, math.sqrt(2.0 * m * (height - E)) / hbar)


def _propagation(kappa: complex, d: float) -> TransferMatrix:
    if kappa.imag == 0.0:
        phase = cmath.exp(1j * kappa.real * d)
        return TransferMatrix(phase, 0j, 0j, 1.0 / phase, 0.0)
    # Evanescent: diag(e^-qd, e^+qd) = e^qd * diag(e^-2qd, 1), scalar in logs.
    q = kappa.imag
    return TransferMatrix(complex(math.exp(-2.0 * q * d)), 0j, 0j, 1.0 + 0j, q * d)


def transfer_matrix(
    profile: PotentialProfile, E: float, constants: PhysicalConstants = CODATA2018
) -> TransferMatrix:
    """Total coefficient map from the left outer region to the right one.

    Includes the outer-medium interfaces on both ends, so profile matrices
    compose by plain multiplication (the inner outer-medium interfaces of
    adjacent profiles cancel exactly).
    """
    if not E > 0.0:
        raise DomainError(f"energy must be > 0, got {E} J")
    hbar = constants.hbar
    k_out = _segment_kappa(E, 0.0, profile.m, hbar)
    total = TransferMatrix.identity()
    kappa_prev = k_out
    for width, height in profile.segments:
        kappa = _segment_kappa(E, height, profile.m, hbar)
        total = _propagation(kappa, width) @ (_interface(kappa_prev, kappa) @ total)
        kappa_prev = kappa
    return _interface(kappa_prev, k_out) @ total


def solve(
    profile: PotentialProfile, E: float, constants: PhysicalConstants = CODATA2018
) -> ScatterSolution:
    """Transmission and reflection amplitudes for a wave incident from the left."""
    mat = transfer_matrix(profile, E, constants)
    if mat.m22 == 0:
        raise DegenerateMatchingError("singular transfer matrix")
    r = -mat.m21 / mat.m22
    # (A_out, 0) = e^lam M (1, r); det(e^lam M) = 1 for equal outer media,
    # so A_out = e^-lam / M22 without forming the cancellation-prone determinant.
    k = math.sqrt(2.0 * profile.m * E) / constants.hbar
    w_total = profile.total_width
    a_out = cmath.exp(complex(-mat.log_scale, -k * w_total)) / mat.m22
    return ScatterSolution(t=a_out, r=r)
