"""Relative spectral invariants of pairs of 1D Dirac/Laplace-type operators.

Heat traces, zeta determinants, Krein spectral shift, relative/Witten
indices, eta invariants, analytic torsion, and Sobolev metric distances,
all for pairs of weighted self-adjoint finite-difference operators.
"""

__version__ = "0.1.0"

from .errors import (
    CompatibilityError,
    ComponentViolationError,
    ConfigError,
    DomainError,
    FitError,
    GradingError,
    HypothesisError,
    NumericalError,
    RelspecError,
    ShapeError,
)
from .geometry import (
    Boundary,
    Grid1D,
    GridKind,
    MetricData,
    ScalarField,
    SobolevDistanceReport,
    discrete_sobolev_distance,
    symmetry_defect,
)
from .operators import (
    GradedPair,
    PaddedPair,
    SelfAdjointOperator,
    WeightedSpace,
    build_derham_circle,
    build_eta_model,
    build_padded_pair,
    build_schrodinger,
    build_susy_pair,
    deserialize_operator,
    serialize_operator,
    transport_operator,
)
from .spectra import ExplicitSpectrum, Spectrum, eigendecompose, eigensolve
from .heat import (
    DuhamelReport,
    GaussianDecayReport,
    HeatTraceSamples,
    Semigroup,
    decay_diagnostics,
    duhamel_residual,
    heat_kernel_matrix,
    projected_relative_trace,
    relative_heat_trace,
    weighted_duhamel_residual,
)
from .zeta import (
    AsymptoticFit,
    EtaResult,
    RelativeZeta,
    fit_expansion,
    relative_determinant,
    relative_eta,
    relative_torsion,
    relative_zeta,
    relative_zeta_at_zero,
    zeta_prime_at_zero_for_pair,
)
from .index import (
    IndexReport,
    ScatteringCertificate,
    SpectralShift,
    WittenIndexResult,
    krein_heat_defect,
    krein_test_defect,
    relative_supertrace,
    scattering_index,
    spectral_shift,
    susy_scattering_certificate,
    witten_index,
)

__all__ = [name for name in dir() if not name.startswith("_")]
