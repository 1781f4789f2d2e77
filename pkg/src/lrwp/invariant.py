"""Linear dynamical invariant I(t) = A(t)·p̂ + B(t)·x̂ + C(t).

The coefficients evolve as

    A(t) = A0 − (B0/m)·t,   B(t) = B0,
    C(t) = C0 − A(t)·G(t) − (B0/m)·G1(t),

so that I(t) equals A0·p̂(0) + B0·x̂(0) + C0 for all times. The complex ratio
F0 = B0/A0 classifies the eigenfunctions: Im(F0) < 0 gives normalizable
Gaussian packets, F0 = 0 gives driven plane waves, and Im(F0) = 0 with
F0 ≠ 0 is rejected because the density would collapse and diverge at
t = m/F0. The operator is deliberately allowed to be non-Hermitian; no
Hermiticity is ever assumed or enforced.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .classical import ClassicalState, p_c, x_c
from .errors import (
    DivergentDensityError,
    PositionBranchError,
    SingularIntegrandError,
    UnphysicalInvariantError,
)
from .fields import WaveField, boundary_amplitude, spectral_derivative
from .forcing import Quadratures
from .quadrature import adaptive_simpson

__all__ = [
    "PacketMode",
    "InvariantSpec",
    "InvariantCoefficients",
    "coeffs_at",
    "eigenvalue",
    "apply_invariant",
    "eigen_residual",
    "phase_alpha",
]

BOUNDARY_SUPPORT_TOL = 1e-12


class PacketMode(enum.Enum):
    GTWP = "gtwp"
    PLANE_WAVE = "plane_wave"


@dataclass(frozen=True)
class InvariantSpec:
    """Complex constants (A0, B0, C0); validated at construction."""

    A0: complex
    B0: complex
    C0: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "A0", complex(self.A0))
        object.__setattr__(self, "B0", complex(self.B0))
        object.__setattr__(self, "C0", complex(self.C0))
        if self.A0 == 0:
            raise PositionBranchError(
                "A0 = 0 selects position eigenfunctions; not supported"
            )
        f0 = self.F0
        if f0.imag > 0:
            raise UnphysicalInvariantError("unphysical invariant: Im(F0) > 0")
        if f0.imag == 0 and f0 != 0:
            raise DivergentDensityError(
                "divergent density: Im(F0) = 0 with F0 != 0 "
                "(width collapses at t = m/F0)"
            )

    @property
    def F0(self) -> complex:
        return self.B0 / self.A0

    @property
    def mode(self) -> PacketMode:
        return PacketMode.GTWP if self.F0.imag < 0 else PacketMode.PLANE_WAVE


@dataclass(frozen=True)
class InvariantCoefficients:
    A: complex
    B: complex
    C: complex
    t: float


def coeffs_at(spec: InvariantSpec, m: float, q: Quadratures, t: float) -> InvariantCoefficients:
    """Coefficients of the invariant at time t."""
    if t < 0:
        raise ValueError("negative time")
    a = spec.A0 - spec.B0 / m * t
    c = spec.C0 - a * q.G(t) - spec.B0 / m * q.G1(t)
    return InvariantCoefficients(A=a, B=spec.B0, C=c, t=t)


def eigenvalue(spec: InvariantSpec, state: ClassicalState) -> complex:
    """λ = A0·p0 + B0·x0 + C0, equal to A(t)·p_c(t) + B·x_c(t) + C(t) for all t."""
    return spec.A0 * state.p0 + spec.B0 * state.x0 + spec.C0


def apply_invariant(coeffs: InvariantCoefficients, field: WaveField, hbar: float) -> WaveField:
    """Sample A·(−iħ ∂ₓψ) + B·x·ψ + C·ψ on the grid of ``field``.

    The derivative is spectral, so the field must vanish at the box edges;
    if it does not, the result is flagged ``boundary_contamination`` rather
    than rejected (periodic inputs such as plane waves stay exact).
    """
    if field.space.name != "POSITION":
        raise ValueError("apply_invariant expects a position-space field")
    x = field.grid.points
    dpsi = spectral_derivative(field.values, field.grid)
    values = coeffs.A * (-1j * hbar * dpsi) + coeffs.B * x * field.values + coeffs.C * field.values
    flags = field.flags
    if boundary_amplitude(field) >= BOUNDARY_SUPPORT_TOL and "boundary_contamination" not in flags:
        flags = flags + ("boundary_contamination",)
    return WaveField(grid=field.grid, t=field.t, values=values, space=field.space, flags=flags)


def eigen_residual(
    coeffs: InvariantCoefficients, field: WaveField, lam: complex, hbar: float
) -> float:
    """Relative eigen-equation residual ‖Iψ − λψ‖ / scale.

    The scale is max(‖λψ‖, ‖A·p̂ψ‖ + ‖B·x̂ψ‖ + |C|·‖ψ‖) so the measure stays
    meaningful when λ = 0 (which happens for packets launched from the
    phase-space origin with C0 = 0).
    """
    dx = field.grid.spacing
    x = field.grid.points
    dpsi = spectral_derivative(field.values, field.grid)

    def l2(v):
        return float(np.sqrt(np.sum(np.abs(v) ** 2) * dx))

    norm_psi = l2(field.values)
    term_p = abs(coeffs.A) * hbar * l2(dpsi)
    term_x = abs(coeffs.B) * l2(x * field.values)
    scale = max(abs(lam) * norm_psi, term_p + term_x + abs(coeffs.C) * norm_psi)
    iv = apply_invariant(coeffs, field, hbar)
    return l2(iv.values - lam * field.values) / scale


def phase_alpha(
    spec: InvariantSpec,
    state: ClassicalState,
    q: Quadratures,
    lam: complex,
    hbar: float,
    t: float,
    alpha0: complex = 0j,
    tol: float = 1e-12,
) -> complex:
    """Time-dependent phase α(t) of the evolving eigenfunction.

    α(t) = α(0) − ∫₀ᵗ [(λ − C(τ))² + iħ·B0·A(τ)] / (2mħ·A(τ)²) dτ,
    with the complex integrand integrated adaptively (real and imaginary
    parts share one subdivision). In general α(t) is complex.
    """
    if t < 0:
        raise ValueError("negative time")
    m = state.m
    if spec.B0 != 0:
        t_zero = m * spec.A0 / spec.B0  # A(t_zero) = 0
        if abs(t_zero.imag) < 1e-15 * max(1.0, abs(t_zero.real)) and 0.0 <= t_zero.real <= t:
            raise SingularIntegrandError(
                f"A(t) vanishes at t = {t_zero.real:g} inside [0, {t:g}]"
            )

    def integrand(tau: float) -> complex:
        c = coeffs_at(spec, m, q, tau)
        return ((lam - c.C) ** 2 + 1j * hbar * spec.B0 * c.A) / (2.0 * m * hbar * c.A**2)

    return alpha0 - adaptive_simpson(integrand, 0.0, t, tol)
