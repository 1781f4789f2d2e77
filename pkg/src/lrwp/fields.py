"""Sampled complex fields on uniform grids, plus spectral helpers.

Grids are endpoint-exclusive (points lo, lo+Δ, …, hi−Δ) so the FFT
conventions line up exactly; n must be a power of two. The Nyquist bin is
masked out of momentum observables and spectral derivatives.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateFieldError

__all__ = [
    "Space",
    "Grid1D",
    "WaveField",
    "wavenumbers",
    "spectral_derivative",
    "field_norm",
    "l2_distance",
    "l2_error",
    "grid_moments",
    "momentum_moments",
    "boundary_amplitude",
    "conjugate_momentum_grid",
]


class Space(enum.Enum):
    POSITION = "position"
    MOMENTUM = "momentum"


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid1D:
    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("grid needs lo < hi")
        if self.n < 16 or not _is_pow2(self.n):
            raise ValueError("grid size must be a power of two, at least 16")

    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / self.n

    @property
    def points(self) -> np.ndarray:
        return self.lo + self.spacing * np.arange(self.n)


@dataclass(frozen=True)
class WaveField:
    """One snapshot of a complex field, in position or momentum space.

    ``flags`` accumulates non-fatal quality warnings (e.g. boundary
    contamination) raised by operations along the way.
    """

    grid: Grid1D
    t: float
    values: np.ndarray
    space: Space = Space.POSITION
    flags: tuple[str, ...] = field(default=())

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.n,):
            raise ValueError("values length must match the grid")
        object.__setattr__(self, "values", values)


def wavenumbers(grid: Grid1D) -> np.ndarray:
    return 2.0 * np.pi * np.fft.fftfreq(grid.n, d=grid.spacing)


def _nyquist_mask(n: int) -> np.ndarray:
    mask = np.ones(n)
    mask[n // 2] = 0.0
    return mask


def spectral_derivative(values: np.ndarray, grid: Grid1D) -> np.ndarray:
    k = wavenumbers(grid) * _nyquist_mask(grid.n)
    return np.fft.ifft(1j * k * np.fft.fft(values))


def field_norm(f: WaveField) -> float:
    """√(Σ|ψ|²·Δ) on the field's own axis."""
    return float(np.sqrt(np.sum(np.abs(f.values) ** 2) * f.grid.spacing))


def l2_distance(a: WaveField, b: WaveField) -> float:
    return float(np.sqrt(np.sum(np.abs(a.values - b.values) ** 2) * a.grid.spacing))


def l2_error(f: WaveField, reference: WaveField) -> float:
    """‖f − ref‖ / ‖ref‖ on a shared grid."""
    if f.grid != reference.grid:
        raise ValueError("fields live on different grids")
    ref_norm = field_norm(reference)
    if ref_norm == 0.0:
        raise DegenerateFieldError("reference field has zero norm")
    return l2_distance(f, reference) / ref_norm


def grid_moments(f: WaveField) -> tuple[float, float]:
    """(mean, std) of the field's own coordinate under the density |ψ|²."""
    w = np.abs(f.values) ** 2
    total = np.sum(w)
    if total == 0.0:
        raise DegenerateFieldError("field has zero norm")
    u = f.grid.points
    mean = float(np.sum(u * w) / total)
    var = float(np.sum((u - mean) ** 2 * w) / total)
    return mean, float(np.sqrt(max(var, 0.0)))


def momentum_moments(f: WaveField, hbar: float) -> tuple[float, float]:
    """(⟨p⟩, Δp) of a position-space field, computed spectrally."""
    if f.space is not Space.POSITION:
        raise ValueError("momentum_moments expects a position-space field")
    spec = np.fft.fft(f.values)
    w = np.abs(spec) ** 2 * _nyquist_mask(f.grid.n)
    total = np.sum(w)
    if total == 0.0:
        raise DegenerateFieldError("field has zero norm")
    p = hbar * wavenumbers(f.grid)
    mean = float(np.sum(p * w) / total)
    var = float(np.sum((p - mean) ** 2 * w) / total)
    return mean, float(np.sqrt(max(var, 0.0)))


def boundary_amplitude(f: WaveField) -> float:
    return float(max(abs(f.values[0]), abs(f.values[-1])))


def conjugate_momentum_grid(grid: Grid1D, hbar: float) -> Grid1D:
    """Momentum grid conjugate to a position grid: Δp·Δx = 2πħ/n, centered at 0."""
    dp = 2.0 * np.pi * hbar / (grid.n * grid.spacing)
    return Grid1D(lo=-0.5 * grid.n * dp, hi=0.5 * grid.n * dp, n=grid.n)
