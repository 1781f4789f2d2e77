"""Driving forces F(t) and their first two time antiderivatives.

Every closed-form result downstream is built from the two quadratures

    G(t)  = ∫₀ᵗ F(τ) dτ          (momentum delivered by the force)
    G1(t) = ∫₀ᵗ G(τ) dτ          (enters the drift of the packet center)

so each profile kind carries exact antiderivatives. Piecewise-linear (and
tabulated, which interpolates linearly) profiles integrate segment-by-segment
to piecewise-quadratic G and piecewise-cubic G1; nothing needs nested numeric
quadrature. An adaptive-Simpson route is kept as an independent cross-check.

All evaluations accept a scalar or an ndarray of times. Negative times are
rejected everywhere; the lower integration limit is always 0.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import OutOfDomainError
from .quadrature import adaptive_simpson

__all__ = [
    "ForceProfile",
    "ZeroForce",
    "ConstantForce",
    "SinusoidalForce",
    "PiecewiseLinearForce",
    "TabulatedForce",
    "QuadMethod",
    "Quadratures",
    "eval_force",
    "quad_G",
    "quad_G1",
]


def _check_time(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("negative time: force quadratures start at t = 0")
    return t if t.ndim else float(t)


class ForceProfile:
    """Base class; subclasses provide force(t), g(t) = ∫F and g1(t) = ∫∫F."""

    def force(self, t):
        raise NotImplementedError

    def g(self, t):
        raise NotImplementedError

    def g1(self, t):
        raise NotImplementedError


@dataclass(frozen=True)
class ZeroForce(ForceProfile):
    def force(self, t):
        return _check_time(t) * 0.0

    def g(self, t):
        return _check_time(t) * 0.0

    def g1(self, t):
        return _check_time(t) * 0.0


@dataclass(frozen=True)
class ConstantForce(ForceProfile):
    amplitude: float

    def force(self, t):
        return _check_time(t) * 0.0 + self.amplitude

    def g(self, t):
        return self.amplitude * _check_time(t)

    def g1(self, t):
        t = _check_time(t)
        return 0.5 * self.amplitude * t * t


@dataclass(frozen=True)
class SinusoidalForce(ForceProfile):
    """F(t) = amplitude · sin(omega·t + phase)."""

    amplitude: float
    omega: float
    phase: float = 0.0

    def __post_init__(self):
        if self.omega == 0.0:
            raise ValueError("omega must be nonzero (use ConstantForce instead)")

    def force(self, t):
        return self.amplitude * np.sin(self.omega * _check_time(t) + self.phase)

    def g(self, t):
        t = _check_time(t)
        return (self.amplitude / self.omega) * (
            np.cos(self.phase) - np.cos(self.omega * t + self.phase)
        )

    def g1(self, t):
        t = _check_time(t)
        return (self.amplitude / self.omega) * (
            t * np.cos(self.phase)
            - (np.sin(self.omega * t + self.phase) - np.sin(self.phase)) / self.omega
        )


@dataclass(frozen=True)
class PiecewiseLinearForce(ForceProfile):
    """Linear interpolation between (t, F) knots; exact segment integrals.

    The first knot must sit at t = 0 and knot times must increase strictly.
    Evaluation outside [0, last knot] raises OutOfDomainError.
    """

    knots: tuple[tuple[float, float], ...]
    _ts: np.ndarray = field(init=False, repr=False, compare=False)
    _fs: np.ndarray = field(init=False, repr=False, compare=False)
    _slopes: np.ndarray = field(init=False, repr=False, compare=False)
    _g_knots: np.ndarray = field(init=False, repr=False, compare=False)
    _g1_knots: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        knots = tuple((float(t), float(f)) for t, f in self.knots)
        object.__setattr__(self, "knots", knots)
        if len(knots) < 2:
            raise ValueError("need at least two knots")
        ts = np.array([t for t, _ in knots])
        fs = np.array([f for _, f in knots])
        if ts[0] != 0.0:
            raise ValueError("first knot must be at t = 0")
        dts = np.diff(ts)
        if np.any(dts <= 0):
            raise ValueError("knot times must be strictly increasing")
        slopes = np.diff(fs) / dts
        # cumulative exact integrals at the knots
        g = np.concatenate(([0.0], np.cumsum(0.5 * (fs[:-1] + fs[1:]) * dts)))
        seg_g1 = g[:-1] * dts + 0.5 * fs[:-1] * dts**2 + slopes * dts**3 / 6.0
        g1 = np.concatenate(([0.0], np.cumsum(seg_g1)))
        object.__setattr__(self, "_ts", ts)
        object.__setattr__(self, "_fs", fs)
        object.__setattr__(self, "_slopes", slopes)
        object.__setattr__(self, "_g_knots", g)
        object.__setattr__(self, "_g1_knots", g1)

    def _segment(self, t):
        t = _check_time(t)
        arr = np.atleast_1d(np.asarray(t, dtype=float))
        limit = self._ts[-1]
        # tolerate accumulated float fuzz from stepping t = k*dt up to t_max
        tol = 1e-9 * max(1.0, limit)
        if np.any(arr > limit + tol):
            raise OutOfDomainError(f"t beyond the last knot at {limit:g}")
        arr = np.minimum(arr, limit)
        idx = np.clip(np.searchsorted(self._ts, arr, side="right") - 1, 0, len(self._ts) - 2)
        return t, arr, idx

    def force(self, t):
        t, arr, i = self._segment(t)
        out = self._fs[i] + self._slopes[i] * (arr - self._ts[i])
        return out if np.ndim(t) else float(out[0])

    def g(self, t):
        t, arr, i = self._segment(t)
        tau = arr - self._ts[i]
        out = self._g_knots[i] + self._fs[i] * tau + 0.5 * self._slopes[i] * tau**2
        return out if np.ndim(t) else float(out[0])

    def g1(self, t):
        t, arr, i = self._segment(t)
        tau = arr - self._ts[i]
        out = (
            self._g1_knots[i]
            + self._g_knots[i] * tau
            + 0.5 * self._fs[i] * tau**2
            + self._slopes[i] * tau**3 / 6.0
        )
        return out if np.ndim(t) else float(out[0])


@dataclass(frozen=True)
class TabulatedForce(PiecewiseLinearForce):
    """Sampled force, linearly interpolated (declared interpolation order 1)."""

    interpolation_order = 1


class QuadMethod(enum.Enum):
    CLOSED_FORM = "closed_form"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class Quadratures:
    """Bundle of G and G1 for one profile, tagged with how they are computed.

    Both routes satisfy G(0) = G1(0) = 0 exactly; the numeric route integrates
    the force with adaptive Simpson and exists mainly to cross-check the
    closed forms.
    """

    profile: ForceProfile
    method: QuadMethod
    tol: float = 1e-12

    @classmethod
    def closed_form(cls, profile: ForceProfile) -> "Quadratures":
        return cls(profile=profile, method=QuadMethod.CLOSED_FORM)

    @classmethod
    def numeric(cls, profile: ForceProfile, tol: float = 1e-12) -> "Quadratures":
        return cls(profile=profile, method=QuadMethod.NUMERIC, tol=tol)

    def G(self, t):
        if self.method is QuadMethod.CLOSED_FORM:
            return self.profile.g(t)
        t = _check_time(t)
        if np.ndim(t):
            return np.array([self.G(float(ti)) for ti in t])
        return adaptive_simpson(lambda tau: self.profile.force(tau), 0.0, t, self.tol).real

    def G1(self, t):
        if self.method is QuadMethod.CLOSED_FORM:
            return self.profile.g1(t)
        t = _check_time(t)
        if np.ndim(t):
            return np.array([self.G1(float(ti)) for ti in t])
        # integration by parts collapses the double integral to one pass:
        # G1(t) = ∫₀ᵗ (t−τ)·F(τ) dτ
        return adaptive_simpson(
            lambda tau: (t - tau) * self.profile.force(tau), 0.0, t, self.tol
        ).real


def eval_force(profile: ForceProfile, t):
    """F(t); exact for closed-form kinds, interpolated for tabulated ones."""
    return profile.force(t)


def quad_G(q: Quadratures, t):
    """G(t) = ∫₀ᵗ F dτ."""
    return q.G(t)


def quad_G1(q: Quadratures, t):
    """G1(t) = ∫₀ᵗ G dτ."""
    return q.G1(t)
