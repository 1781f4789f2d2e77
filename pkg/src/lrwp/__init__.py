"""Closed-form wave packets for a particle driven by a time-dependent linear
potential, with two independent numerical propagators for cross-validation."""

from .classical import ClassicalState, KineticActionTable, kinetic_action, p_c, x_c
from .errors import (
    AcceptanceViolation,
    AliasingError,
    ConfigError,
    ContainmentError,
    DegenerateFieldError,
    DivergentDensityError,
    InstabilityError,
    LrwpError,
    ModeMismatchError,
    OutOfDomainError,
    PositionBranchError,
    QuadratureError,
    SingularIntegrandError,
    UnphysicalInvariantError,
)
from .fields import Grid1D, Space, WaveField, conjugate_momentum_grid
from .forcing import (
    ConstantForce,
    ForceProfile,
    PiecewiseLinearForce,
    QuadMethod,
    Quadratures,
    SinusoidalForce,
    TabulatedForce,
    ZeroForce,
    eval_force,
    quad_G,
    quad_G1,
)
from .invariant import (
    InvariantCoefficients,
    InvariantSpec,
    PacketMode,
    apply_invariant,
    coeffs_at,
    eigen_residual,
    eigenvalue,
    phase_alpha,
)
from .oracle import (
    EhrenfestReport,
    GridSpec,
    ObservableRecord,
    ehrenfest_check,
    observables,
    propagate_cranknicolson,
    propagate_splitstep,
)
from .quadrature import adaptive_simpson
from .wavepacket import (
    GaussianMomentumParams,
    MatchedParameters,
    PacketState,
    analytic_norm_sq,
    delta_p,
    delta_x,
    density,
    density_closed_form,
    fourier_bridge,
    gaussian_phi0,
    gaussian_phi_pt,
    gtwp_psi,
    match_parameters,
    matched_packet,
    min_uncertainty_time,
    momentum_solution,
    plane_wave_psi,
    plane_wave_superposition,
    sample_gaussian_momentum,
    sample_gtwp,
    sample_plane_wave,
    spreading_time,
    uncertainty_product,
)

__version__ = "0.1.0"
