"""Numerical tolerances shared by the library and its tests."""

# structural checks: Hermiticity, unit trace
STRUCTURAL_TOL = 1e-12
# spectral checks: PSD, eigenvalue sums
SPECTRAL_TOL = 1e-10
# admitted slack on |s| <= 1 for raw Stokes estimates
STOKES_NORM_TOL = 1e-9

# Jacobi sweeps stop once the off-diagonal Frobenius norm drops below this
JACOBI_OFFDIAG_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100

# seed instability threshold for 1 +/- s3 and sqrt(s1^2 + s2^2)
EPSILON_FALLBACK = 1e-3
# arbitrary start used when a seed formula is singular: (t1, t2, t3, t4)
FALLBACK_SEED = (1.0, 0.0, 1.0, 1.0)

# regularization shift added on top of -lambda_min before factorizing
MULTIQUBIT_RIDGE = 1e-6

PROBABILITY_FLOOR = 1e-12
EXPECTED_COUNT_FLOOR = 1e-9

SIMPLEX_F_TOL = 1e-10
SIMPLEX_MAX_ITER_PER_PARAM = 20_000
