"""Overlap integrals of 1D continuum scattering states.

Exact scattering coefficients for a small catalog of solvable potentials,
three cross-checking routes to the overlap integral of two stationary
states (direct quadrature, Wronskian boundary reduction, closed-form
delta-term decomposition), exponentially damped variants, and the
time-dependent norm of Gaussian wave packets built from those states.
"""

__version__ = "0.1.0"

from .numerics import (
    DEFAULT_QUADRATURE,
    NonConvergence,
    PoleOfGamma,
    PoleOutsideInterval,
    QuadratureConfig,
    airy_ai,
    airy_ai_prime,
    dirichlet_kernel,
    integrate_complex,
    log_gamma_complex,
    principal_value,
)
from .potentials import (
    DividesByZeroD,
    PotentialSpec,
    ScatteringCoefficients,
    Wavenumbers,
    airy_state,
    coefficient_arrays,
    coefficients,
    interior_wavenumber,
    wavefunction,
    wavefunction_derivative,
)
from .overlap import (
    BoundaryCurrent,
    DegenerateEnergies,
    DegenerateMomenta,
    OverlapDecomposition,
    RegularizationReport,
    RegularizedOverlap,
    airy_closure_check,
    airy_closure_derivative_check,
    airy_kernel,
    boundary_current,
    delta_grid,
    direct_overlap,
    extract_delta_from_direct,
    finite_interval_identity_residual,
    nonorthogonality_kernel,
    regularization_compare,
    regularized_free_halfline,
    regularized_free_interval,
    regularized_overlap,
    overlap_decomposition,
    twisted_boundary_overlap,
)
from .wavepacket import (
    CorrelationAmplitudes,
    GridTooCoarse,
    NormTrace,
    PacketSpec,
    SWaveSpec,
    correlation_amplitudes,
    norm_direct,
    norm_rate,
    norm_trace,
    stationary_phase_norm_rate,
    swave_norm_rate,
    swave_norm_trace,
)
