"""Density-matrix reconstruction with interchangeable T-matrix forms."""

from .fitting import (
    ConsistencyReport,
    FitConfig,
    FitResult,
    Objective,
    ObjectiveKind,
    cross_form_check,
    evaluate_objective,
    fit_form,
    fit_with_policy,
    minimize,
)
from .forms import FormId, TParams, build_T, closed_form_rho, param_count, rho_from_t
from .linalg import (
    check_density_matrix,
    conj_transpose,
    fidelity,
    hermitian_eig,
    hermitian_eigenvalues,
    mat_mul,
    trace,
    trace_distance,
    uhlmann_fidelity,
)
from .seeding import (
    Region,
    SeedResult,
    classify_region,
    seed_form_a,
    seed_form_b,
    seed_form_c,
    seed_form_d,
    seed_multiqubit,
)
from .stokes import (
    MeasurementRecord,
    MeasurementSet,
    StokesVector,
    UnphysicalStateError,
    born_probabilities,
    expected_counts,
    linear_inversion,
    rho_from_stokes,
    sample_counts,
    stokes_from_counts,
    stokes_from_rho,
)

__version__ = "0.1.0"
