"""Small dense complex matrices and the Hermitian diagnostics built on them.

Matrices are plain ``numpy`` arrays of shape ``(dim, dim)``. The helpers here
validate shapes and finiteness so that the rest of the package can assume a
clean input.
"""

import numpy as np

from .constants import (
    JACOBI_MAX_SWEEPS,
    JACOBI_OFFDIAG_TOL,
    SPECTRAL_TOL,
    STRUCTURAL_TOL,
)


def as_matrix(a):
    """Return ``a`` as a finite square complex array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def mat_mul(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b


def conj_transpose(a):
    return as_matrix(a).conj().T


def trace(a):
    return complex(np.trace(as_matrix(a)))


def is_hermitian(a, tol=STRUCTURAL_TOL):
    m = as_matrix(a)
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def check_density_matrix(rho, tol=STRUCTURAL_TOL, psd_tol=SPECTRAL_TOL):
    """Validate ``rho`` as a density matrix and return it as a complex array.

    Raises:
        ValueError: if ``rho`` is not Hermitian, not unit-trace, or has an
            eigenvalue below ``-psd_tol``.
    """
    m = as_matrix(rho)
    if not is_hermitian(m, tol):
        raise ValueError("density matrix is not Hermitian")
    tr = np.trace(m)
    if abs(tr.imag) > tol or abs(tr.real - 1.0) > tol:
        raise ValueError(f"density matrix trace is {tr}, expected 1")
    lam_min = hermitian_eigenvalues(m)[0]
    if lam_min < -psd_tol:
        raise ValueError(f"density matrix has negative eigenvalue {lam_min:.3e}")
    return m


def _jacobi_rotation(app, aqq, apq):
    # real symmetric 2x2 Schur step (Golub & Van Loan, sym.schur2)
    r = abs(apq)
    tau = (aqq - app) / (2.0 * r)
    t = np.copysign(1.0, tau) / (abs(tau) + np.hypot(1.0, tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    return c, t * c


def hermitian_eig(a, tol=JACOBI_OFFDIAG_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the real symmetric Schur rotation to the resulting 2x2 block.

    Args:
        a: Hermitian matrix (within ``STRUCTURAL_TOL``).
        tol: Sweeps stop once the off-diagonal Frobenius norm is below
            ``tol * max(1, ||a||_F)``.
        max_sweeps: Hard cap on the number of sweeps.

    Returns:
        ``(w, v)`` with ascending real eigenvalues ``w`` and unitary ``v``
        whose columns are the matching eigenvectors, so that
        ``a = v @ diag(w) @ v^H``.
    """
    m = as_matrix(a)
    if not is_hermitian(m):
        raise ValueError("matrix is not Hermitian")
    A = 0.5 * (m + m.conj().T)
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    threshold = tol * max(1.0, np.linalg.norm(A))

    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) < 1e-300:
                    continue
                phase = apq / abs(apq)
                c, s = _jacobi_rotation(A[p, p].real, A[q, q].real, apq)
                U = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ U
                A[idx, :] = U.conj().T @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                V[:, idx] = V[:, idx] @ U
    else:
        raise RuntimeError("Jacobi iteration did not converge")

    w = np.diag(A).real
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def hermitian_eigenvalues(a):
    """Ascending real spectrum of a Hermitian matrix.

    2x2 inputs use the closed form from trace and determinant; larger inputs
    go through :func:`hermitian_eig`.
    """
    m = as_matrix(a)
    if not is_hermitian(m):
        raise ValueError("matrix is not Hermitian")
    if m.shape[0] == 1:
        return np.array([m[0, 0].real])
    if m.shape[0] == 2:
        half_tr = 0.5 * (m[0, 0].real + m[1, 1].real)
        half_gap = 0.5 * (m[0, 0].real - m[1, 1].real)
        r = np.hypot(half_gap, abs(m[0, 1]))
        return np.array([half_tr - r, half_tr + r])
    return hermitian_eig(m)[0]


def _check_pair(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def fidelity(a, b):
    """Agreement score between two density matrices, in ``[0, 1]``.

    Computes the superfidelity ``Tr(ab) + sqrt((1 - Tr a^2)(1 - Tr b^2))``.
    When either state is pure this is exactly ``<psi|rho|psi>``, and for a
    single qubit it coincides with the Uhlmann fidelity. For mixed states of
    more than one qubit it is an upper bound on the Uhlmann fidelity; use
    :func:`uhlmann_fidelity` when the exact value matters.
    """
    a, b = _check_pair(a, b)
    overlap = np.trace(a @ b).real
    mix_a = 1.0 - np.trace(a @ a).real
    mix_b = 1.0 - np.trace(b @ b).real
    # a rank-1 argument leaves exactly <psi|rho|psi>
    if mix_a <= STRUCTURAL_TOL or mix_b <= STRUCTURAL_TOL:
        return float(np.clip(overlap, 0.0, 1.0))
    return float(np.clip(overlap + np.sqrt(mix_a * mix_b), 0.0, 1.0))


def _psd_sqrt(a):
    w, v = hermitian_eig(a)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def uhlmann_fidelity(a, b):
    """Squared Uhlmann fidelity ``(Tr sqrt(sqrt(a) b sqrt(a)))^2``."""
    a, b = _check_pair(a, b)
    sa = _psd_sqrt(a)
    inner = sa @ b @ sa
    inner = 0.5 * (inner + inner.conj().T)
    w = np.clip(hermitian_eigenvalues(inner), 0.0, None)
    return float(np.clip(np.sum(np.sqrt(w)) ** 2, 0.0, 1.0))


def trace_distance(a, b):
    a, b = _check_pair(a, b)
    diff = a - b
    diff = 0.5 * (diff + diff.conj().T)
    return float(0.5 * np.sum(np.abs(hermitian_eigenvalues(diff))))
