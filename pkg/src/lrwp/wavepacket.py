"""Closed-form solutions for a particle driven by a spatially linear force.

Configuration space: eigenfunctions of the linear invariant, dressed with
their time-dependent phase, give the Gaussian-type wave packet

    ψ(x,t) = e^{iα(0)} / √(A(t)/A0)
             · exp[−(i/ħ)·S(t)]
             · exp[−i·B0·(x−x_c)² / (2ħ·A(t)) + (i/ħ)·p_c·x]

with S(t) the kinetic action of the packet center. Its width follows
Δx(t) = √(ħ/2)·|A(t)/A0|/√(−Im F0) while Δp stays constant, and the
uncertainty product dips to exactly ħ/2 at t* = Re(m/F0).

Momentum space: the same dynamics is a shift p → p − G(t) plus a phase,

    φ(p,t) = φ0(p−G(t)) · exp{−(i/ħ)∫₀ᵗ [p−G(t)+G(τ)]²/(2m) dτ},

and a Gaussian φ0 reproduces the packet above once F0 = −i·m/T and
e^{iα(0)} = (2πσ²)^{−1/4}, where T = 2mσ²/ħ is the spreading time.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .classical import ClassicalState, kinetic_action, p_c, x_c
from .errors import ModeMismatchError
from .fields import Grid1D, Space, WaveField, boundary_amplitude, conjugate_momentum_grid
from .forcing import Quadratures
from .invariant import InvariantSpec, PacketMode, coeffs_at, eigenvalue, phase_alpha

__all__ = [
    "PacketState",
    "GaussianMomentumParams",
    "MatchedParameters",
    "gtwp_psi",
    "plane_wave_psi",
    "density",
    "density_closed_form",
    "analytic_norm_sq",
    "delta_x",
    "delta_p",
    "uncertainty_product",
    "min_uncertainty_time",
    "gaussian_phi0",
    "gaussian_phi_pt",
    "momentum_solution",
    "fourier_bridge",
    "match_parameters",
    "matched_packet",
    "spreading_time",
    "plane_wave_superposition",
    "sample_gtwp",
    "sample_plane_wave",
    "sample_gaussian_momentum",
]

ALIASING_TOL = 1e-10


@dataclass(frozen=True)
class PacketState:
    """Everything that pins down one packet solution.

    ``alpha0`` defaults to the purely imaginary value that normalizes the
    packet to unit probability (it is a free constant otherwise).
    """

    m: float
    hbar: float
    x0: float
    p0: float
    spec: InvariantSpec
    alpha0: complex | None = None

    def __post_init__(self):
        if self.m <= 0 or self.hbar <= 0:
            raise ValueError("m and hbar must be positive")
        if self.alpha0 is None:
            if self.spec.mode is PacketMode.GTWP:
                a0 = 0.25j * math.log(math.pi * self.hbar / (-self.spec.F0.imag))
            else:
                a0 = 0j
            object.__setattr__(self, "alpha0", a0)
        else:
            object.__setattr__(self, "alpha0", complex(self.alpha0))

    @property
    def classical(self) -> ClassicalState:
        return ClassicalState(m=self.m, x0=self.x0, p0=self.p0)

    @property
    def mode(self) -> PacketMode:
        return self.spec.mode


@dataclass(frozen=True)
class GaussianMomentumParams:
    """Width and phase-space center of the initial momentum-space Gaussian."""

    sigma: float
    x0: float = 0.0
    p0: float = 0.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")


@dataclass(frozen=True)
class MatchedParameters:
    F0: complex
    alpha0: complex


def spreading_time(params: GaussianMomentumParams, m: float, hbar: float) -> float:
    """T = 2mσ²/ħ, the timescale of free width growth."""
    return 2.0 * m * params.sigma**2 / hbar


def _require_gtwp(state: PacketState):
    if state.mode is not PacketMode.GTWP:
        raise ModeMismatchError("plane-wave-mode packet: use plane_wave_psi")


def _ratio_a(state: PacketState, t: float) -> complex:
    """A(t)/A0 = 1 − F0·t/m."""
    return 1.0 - state.spec.F0 * t / state.m


def _branch_sqrt(z: complex) -> complex:
    # z(t) = 1 − F0·t/m stays in the closed upper half plane (Im F0 ≤ 0),
    # so the continuous branch starting at √1 = +1 keeps Re ≥ 0; pick it
    # explicitly so roundoff just below the real axis cannot flip the sign.
    w = cmath.sqrt(complex(z))
    return -w if w.real < 0 else w


def gtwp_psi(state: PacketState, q: Quadratures, x, t: float, *, action: float | None = None):
    """Gaussian-type wave packet at position(s) x and time t."""
    _require_gtwp(state)
    if t < 0:
        raise ValueError("negative time")
    cl = state.classical
    if action is None:
        action = kinetic_action(cl, q, t)
    xc = x_c(cl, q, t)
    pc = p_c(cl, q, t)
    hbar = state.hbar
    at = state.spec.A0 * _ratio_a(state, t)
    pref = cmath.exp(1j * state.alpha0) / _branch_sqrt(_ratio_a(state, t))
    pref *= cmath.exp(-1j * action / hbar)
    x = np.asarray(x, dtype=float)
    out = pref * np.exp(
        -1j * state.spec.B0 * (x - xc) ** 2 / (2.0 * hbar * at) + 1j * pc * x / hbar
    )
    return out if out.ndim else complex(out)


def plane_wave_psi(state: PacketState, q: Quadratures, lam: complex, x, t: float):
    """Driven plane-wave solution (F0 = 0 branch) with eigenvalue ``lam``."""
    if state.mode is not PacketMode.PLANE_WAVE:
        raise ModeMismatchError("packet-mode spec: use gtwp_psi")
    if t < 0:
        raise ValueError("negative time")
    coeffs = coeffs_at(state.spec, state.m, q, t)
    alpha = phase_alpha(
        state.spec, state.classical, q, lam, state.hbar, t, alpha0=state.alpha0
    )
    x = np.asarray(x, dtype=float)
    out = cmath.exp(1j * alpha) * np.exp(
        1j * (lam - coeffs.C) * x / (state.hbar * state.spec.A0)
    )
    return out if out.ndim else complex(out)


def density(state: PacketState, q: Quadratures, x, t: float):
    """|ψ(x,t)|², evaluated from the packet itself."""
    return np.abs(gtwp_psi(state, q, x, t)) ** 2


def density_closed_form(state: PacketState, q: Quadratures, x, t: float):
    """Modulus-squared of the packet written directly:

    |ψ|² = e^{−2 Im α(0)} · exp[Im(F0)·(x−x_c)²/(ħ·|A/A0|²)] / |A/A0|.

    Kept as an independent cross-check of :func:`density`.
    """
    _require_gtwp(state)
    xc = x_c(state.classical, q, t)
    r = abs(_ratio_a(state, t))
    x = np.asarray(x, dtype=float)
    out = (
        math.exp(-2.0 * state.alpha0.imag)
        * np.exp(state.spec.F0.imag * (x - xc) ** 2 / (state.hbar * r * r))
        / r
    )
    return out if out.ndim else float(out)


def analytic_norm_sq(state: PacketState) -> float:
    """∫|ψ|²dx of the packet (time-independent)."""
    _require_gtwp(state)
    return math.exp(-2.0 * state.alpha0.imag) * math.sqrt(
        math.pi * state.hbar / (-state.spec.F0.imag)
    )


def delta_x(state: PacketState, t: float) -> float:
    """Δx(t) = √(ħ/2)·|A(t)/A0| / √(−Im F0)."""
    _require_gtwp(state)
    return math.sqrt(state.hbar / 2.0) * abs(_ratio_a(state, t)) / math.sqrt(
        -state.spec.F0.imag
    )


def delta_p(state: PacketState) -> float:
    """Δp = √(ħ/2)·|F0| / √(−Im F0); constant in time."""
    _require_gtwp(state)
    f0 = state.spec.F0
    return math.sqrt(state.hbar / 2.0) * abs(f0) / math.sqrt(-f0.imag)


def uncertainty_product(state: PacketState, t: float) -> float:
    """Δx·Δp = (ħ/2)·|F0·(1 − F0·t/m)| / (−Im F0) ≥ ħ/2."""
    _require_gtwp(state)
    f0 = state.spec.F0
    return 0.5 * state.hbar * abs(f0 * _ratio_a(state, t)) / (-f0.imag)


def min_uncertainty_time(state: PacketState, t_hi: float) -> float:
    """Locate argmin over [0, t_hi] of the uncertainty product numerically.

    Golden-section search brackets the minimum; a parabolic vertex fit on the
    squared product (exactly quadratic in t) then refines it to machine
    accuracy, which plain golden-section cannot reach.
    """
    _require_gtwp(state)

    def f(t):
        return uncertainty_product(state, t) ** 2

    inv = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = 0.0, float(t_hi)
    c, d = b - inv * (b - a), a + inv * (b - a)
    fc, fd = f(c), f(d)
    # stop while the bracket is still wide: the parabola fit below is exact
    # for this family and much better conditioned than a collapsed bracket
    while b - a > 1e-3 * max(1.0, float(t_hi)):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = f(d)
    x1, x3 = a, b
    x2 = 0.5 * (a + b)
    f1, f2, f3 = f(x1), f(x2), f(x3)
    num = (x2 - x1) ** 2 * (f2 - f3) - (x2 - x3) ** 2 * (f2 - f1)
    den = (x2 - x1) * (f2 - f3) - (x2 - x3) * (f2 - f1)
    if den == 0.0:
        t_star = x2
    else:
        t_star = x2 - 0.5 * num / den
    if t_star < 1e-9 * max(1.0, float(t_hi)):
        return 0.0  # boundary minimum: the product only grows for t > 0
    return min(t_star, float(t_hi))


def gaussian_phi0(params: GaussianMomentumParams, hbar: float, p):
    """Initial momentum-space Gaussian

    φ0(p) = (2σ²/πħ²)^{1/4} · exp[−σ²(p−p0)²/ħ² − i(p−p0)x0/ħ].
    """
    s, x0, p0 = params.sigma, params.x0, params.p0
    p = np.asarray(p, dtype=float)
    out = (2.0 * s * s / (math.pi * hbar * hbar)) ** 0.25 * np.exp(
        -(s * s) * (p - p0) ** 2 / hbar**2 - 1j * (p - p0) * x0 / hbar
    )
    return out if out.ndim else complex(out)


def gaussian_phi_pt(
    params: GaussianMomentumParams,
    m: float,
    hbar: float,
    q: Quadratures,
    p,
    t: float,
    *,
    action: float | None = None,
):
    """Momentum-space Gaussian at time t (closed three-factor form)."""
    if t < 0:
        raise ValueError("negative time")
    cl = ClassicalState(m=m, x0=params.x0, p0=params.p0)
    if action is None:
        action = kinetic_action(cl, q, t)
    bigT = spreading_time(params, m, hbar)
    pc = p_c(cl, q, t)
    xc = x_c(cl, q, t)
    s = params.sigma
    p = np.asarray(p, dtype=float)
    out = (
        (2.0 * s * s / (math.pi * hbar * hbar)) ** 0.25
        * cmath.exp(-1j * action / hbar)
        * np.exp(-(s * s) * (1.0 + 1j * t / bigT) * (p - pc) ** 2 / hbar**2)
        * np.exp(-1j * (p - pc) * xc / hbar)
    )
    return out if out.ndim else complex(out)


def momentum_solution(
    phi0: Callable,
    q: Quadratures,
    m: float,
    hbar: float,
    p,
    t: float,
    tol: float = 1e-12,
):
    """General momentum-space solution for an arbitrary initial φ0:

    φ(p,t) = φ0(p−G(t)) · exp{−(i/ħ)∫₀ᵗ [p−G(t)+G(τ)]²/(2m) dτ}.

    With u = p−G(t) the inner integral splits into u²t/2m + u·G1(t)/m plus
    ∫G²/2m, so only the last piece ever needs quadrature (closed form for
    zero/constant force via the action of a center launched at rest).
    """
    if t < 0:
        raise ValueError("negative time")
    g = q.G(t)
    g1 = q.G1(t)
    rest = ClassicalState(m=m, x0=0.0, p0=0.0)
    s0 = kinetic_action(rest, q, t, tol=tol)
    p = np.asarray(p, dtype=float)
    u = p - g
    phase = u * u * t / (2.0 * m) + u * g1 / m + s0
    out = np.asarray(phi0(u)) * np.exp(-1j * phase / hbar)
    return out if out.ndim else complex(out)


def fourier_bridge(
    field: WaveField, hbar: float, position_grid: Grid1D | None = None
) -> WaveField:
    """Transform a momentum-space field to position space:

    ψ(x) = (2πħ)^{−1/2} ∫ φ(p) e^{ipx/ħ} dp,

    realized as a DFT with phase factors for the grid offsets. The transform
    is exactly unitary on the grid (Σ|ψ|²Δx = Σ|φ|²Δp). If the momentum
    samples do not vanish at the grid edges the result carries an
    ``aliasing`` flag.
    """
    if field.space is not Space.MOMENTUM:
        raise ValueError("fourier_bridge expects a momentum-space field")
    pgrid = field.grid
    n, dp, p_lo = pgrid.n, pgrid.spacing, pgrid.lo
    if position_grid is None:
        dx = 2.0 * np.pi * hbar / (n * dp)
        position_grid = Grid1D(lo=-0.5 * n * dx, hi=0.5 * n * dx, n=n)
    else:
        if position_grid.n != n:
            raise ValueError("position grid size must match the momentum grid")
        if abs(position_grid.spacing * dp * n / (2.0 * np.pi * hbar) - 1.0) > 1e-9:
            raise ValueError("grids are not Fourier-conjugate: Δp·Δx must equal 2πħ/n")
    x = position_grid.points
    twisted = field.values * np.exp(1j * np.arange(n) * dp * position_grid.lo / hbar)
    psi = (n * dp / np.sqrt(2.0 * np.pi * hbar)) * np.exp(1j * p_lo * x / hbar) * np.fft.ifft(
        twisted
    )
    flags = field.flags
    if boundary_amplitude(field) > ALIASING_TOL and "aliasing" not in flags:
        flags = flags + ("aliasing",)
    return WaveField(grid=position_grid, t=field.t, values=psi, space=Space.POSITION, flags=flags)


def match_parameters(params: GaussianMomentumParams, m: float, hbar: float) -> MatchedParameters:
    """Invariant ratio and initial phase that make the packet equal the
    transformed momentum-space Gaussian: F0 = −i·m/T, e^{iα(0)} = (2πσ²)^{−1/4}."""
    bigT = spreading_time(params, m, hbar)
    f0 = -1j * m / bigT
    alpha0 = 0.25j * math.log(2.0 * math.pi * params.sigma**2)
    return MatchedParameters(F0=f0, alpha0=alpha0)


def matched_packet(params: GaussianMomentumParams, m: float, hbar: float) -> PacketState:
    """Packet state equivalent to the momentum-space Gaussian description."""
    mp = match_parameters(params, m, hbar)
    spec = InvariantSpec(A0=1.0 + 0j, B0=mp.F0, C0=0j)
    return PacketState(m=m, hbar=hbar, x0=params.x0, p0=params.p0, spec=spec, alpha0=mp.alpha0)


def plane_wave_superposition(
    m: float,
    hbar: float,
    q: Quadratures,
    phi0: Callable,
    p0_values: np.ndarray,
    x,
    t: float,
):
    """Finite weighted sum of plane-wave solutions over launch momenta.

    Discretizes ψ = (2πħ)^{−1/2} ∫ φ0(p0)·ψ_{p0}(x,t) dp0 on a uniform p0
    grid; with a Gaussian weight this rebuilds the packet solution.
    """
    p0_values = np.asarray(p0_values, dtype=float)
    dp = np.diff(p0_values)
    if len(dp) < 1 or not np.allclose(dp, dp[0], rtol=1e-12, atol=0.0):
        raise ValueError("p0_values must be a uniform grid")
    spec = InvariantSpec(A0=1.0 + 0j, B0=0j, C0=0j)
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape if x.ndim else (), dtype=complex)
    for p0 in p0_values:
        state = PacketState(m=m, hbar=hbar, x0=0.0, p0=float(p0), spec=spec, alpha0=0j)
        out = out + complex(phi0(p0)) * plane_wave_psi(state, q, complex(p0), x, t)
    out = out * dp[0] / np.sqrt(2.0 * np.pi * hbar)
    return out if np.ndim(out) else complex(out)


def sample_gtwp(
    state: PacketState, q: Quadratures, grid: Grid1D, t: float, *, action: float | None = None
) -> WaveField:
    values = gtwp_psi(state, q, grid.points, t, action=action)
    return WaveField(grid=grid, t=t, values=values, space=Space.POSITION)


def sample_plane_wave(
    state: PacketState, q: Quadratures, lam: complex, grid: Grid1D, t: float
) -> WaveField:
    values = plane_wave_psi(state, q, lam, grid.points, t)
    return WaveField(grid=grid, t=t, values=values, space=Space.POSITION)


def sample_gaussian_momentum(
    params: GaussianMomentumParams,
    m: float,
    hbar: float,
    q: Quadratures,
    grid: Grid1D,
    t: float,
    *,
    action: float | None = None,
) -> WaveField:
    values = gaussian_phi_pt(params, m, hbar, q, grid.points, t, action=action)
    return WaveField(grid=grid, t=t, values=values, space=Space.MOMENTUM)
