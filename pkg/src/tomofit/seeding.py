"""Starting values for the likelihood search.

Single-qubit seeds invert each form's density matrix against the Stokes
matrix with ``t2`` fixed at 1. Each form has a region of Stokes space where
its formulas blow up:

====  ==========================  ==============================
form  singular denominator        fallback start ``(t1..t4)``
====  ==========================  ==============================
A     ``1 - s3``                  ``(1, 0, 1, 1)``
B     ``1 + s3``                  ``(1, 0, 1, 1)``
C, D  ``s1**2 + s2**2``           ``(1, 0, 1, 1)``
====  ==========================  ==============================

A and B are singular at opposite poles of the Bloch sphere, so one of the
two is always usable.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .constants import EPSILON_FALLBACK, FALLBACK_SEED, MULTIQUBIT_RIDGE
from .forms import FormId, TParams, _layout, rho_from_t
from .linalg import hermitian_eigenvalues
from .stokes import StokesVector


class Region(str, enum.Enum):
    stable = "stable"
    fallback = "fallback"
    clamped = "clamped"


@dataclass(frozen=True)
class SeedResult:
    params: TParams
    region: Region
    notes: str = ""


def _as_stokes(s):
    return s if isinstance(s, StokesVector) else StokesVector(*s)


def _purity_gap(s):
    return max(0.0, 1.0 - s.s1**2 - s.s2**2 - s.s3**2)


def classify_region(s, form, epsilon=EPSILON_FALLBACK):
    """Whether ``form``'s seed formulas are usable at ``s``."""
    s = _as_stokes(s)
    form = FormId(form)
    if form is FormId.A:
        singular = 1.0 - s.s3 < epsilon
    elif form is FormId.B:
        singular = 1.0 + s.s3 < epsilon
    elif form in (FormId.C, FormId.D):
        singular = s.s1**2 + s.s2**2 < epsilon**2
    else:
        raise ValueError(f"no single-qubit seed region for {form.value}")
    return Region.fallback if singular else Region.stable


def _result(form, t, region, s, note):
    if s.clamped and region is Region.stable:
        region = Region.clamped
        note = f"{note}; Stokes estimate was clamped onto the unit sphere"
    return SeedResult(TParams(form, 1, t), region, note)


def _fallback(form, s, fallback, why):
    return _result(form, fallback, Region.fallback, s, f"{why}; arbitrary start with t2 = 0")


def seed_form_a(s, epsilon=EPSILON_FALLBACK, fallback=FALLBACK_SEED):
    s = _as_stokes(s)
    if classify_region(s, FormId.A, epsilon) is Region.fallback:
        return _fallback(FormId.A, s, fallback, "1 - s3 below threshold")
    den = 1.0 - s.s3
    t = (np.sqrt(_purity_gap(s)) / den, 1.0, s.s1 / den, s.s2 / den)
    return _result(FormId.A, t, Region.stable, s, "t2 = 1, denominators 1 - s3")


def seed_form_b(s, epsilon=EPSILON_FALLBACK, fallback=FALLBACK_SEED):
    s = _as_stokes(s)
    if classify_region(s, FormId.B, epsilon) is Region.fallback:
        return _fallback(FormId.B, s, fallback, "1 + s3 below threshold")
    den = 1.0 + s.s3
    t = (np.sqrt(_purity_gap(s)) / den, 1.0, s.s1 / den, -s.s2 / den)
    return _result(FormId.B, t, Region.stable, s, "t2 = 1, denominators 1 + s3")


def seed_form_c(s, epsilon=EPSILON_FALLBACK, fallback=FALLBACK_SEED):
    s = _as_stokes(s)
    if classify_region(s, FormId.C, epsilon) is Region.fallback:
        return _fallback(FormId.C, s, fallback, "s1^2 + s2^2 below threshold")
    q = s.s1**2 + s.s2**2
    t = (np.sqrt(_purity_gap(s) / q), 1.0, (1.0 + s.s3) * s.s1 / q, (1.0 + s.s3) * s.s2 / q)
    return _result(FormId.C, t, Region.stable, s, "t2 = 1, denominators s1^2 + s2^2")


def seed_form_d(s, epsilon=EPSILON_FALLBACK, fallback=FALLBACK_SEED):
    s = _as_stokes(s)
    if classify_region(s, FormId.D, epsilon) is Region.fallback:
        return _fallback(FormId.D, s, fallback, "s1^2 + s2^2 below threshold")
    q = s.s1**2 + s.s2**2
    t = (np.sqrt(_purity_gap(s) / q), 1.0, (1.0 - s.s3) * s.s1 / q, -(1.0 - s.s3) * s.s2 / q)
    return _result(FormId.D, t, Region.stable, s, "t2 = 1, denominators s1^2 + s2^2")


SEEDERS = {
    FormId.A: seed_form_a,
    FormId.B: seed_form_b,
    FormId.C: seed_form_c,
    FormId.D: seed_form_d,
}


def seed_single(s, form, epsilon=EPSILON_FALLBACK, fallback=FALLBACK_SEED):
    return SEEDERS[FormId(form)](s, epsilon=epsilon, fallback=fallback)


def _params_from_factor(T, form, n_qubits):
    """Read a parameter vector off a triangular factor (inverse of ``build_T``)."""
    rows, cols, re_idx, im_idx = _layout(form, n_qubits)
    t = np.zeros(4**n_qubits)
    vals = T[rows, cols]
    t[re_idx] = vals.real
    off = im_idx >= 0
    t[im_idx[off]] = vals[off].imag
    return t


def seed_multiqubit(rho_lin, form=FormId.B_multi, ridge=MULTIQUBIT_RIDGE):
    """Seed an n-qubit triangular form from a (possibly non-PSD) estimate.

    The estimate is shifted to ``(rho + mu I) / (1 + mu d)`` with
    ``mu = max(0, -lambda_min) + ridge`` and then factorized so that
    ``T^H T`` reproduces it exactly: ``T`` upper-triangular for ``B_multi``,
    lower-triangular for ``A_multi``.
    """
    form = FormId(form)
    if form not in (FormId.A_multi, FormId.B_multi):
        raise ValueError(f"{form.value} is not a multi-qubit form")
    rho = np.asarray(rho_lin, dtype=complex)
    rho = 0.5 * (rho + rho.conj().T)
    d = rho.shape[0]
    n = int(round(np.log2(d)))
    if 2**n != d:
        raise ValueError("state dimension is not a power of two")
    rho = rho / np.trace(rho).real

    lam_min = hermitian_eigenvalues(rho)[0]
    mu = max(0.0, -lam_min) + ridge
    reg = (rho + mu * np.eye(d)) / (1.0 + mu * d)
    try:
        if form is FormId.B_multi:
            # reg = L L^H, T = L^H is upper triangular with T^H T = reg
            T = np.linalg.cholesky(reg).conj().T
        else:
            # factor the index-reversed matrix to get reg = U U^H, U upper
            J = np.eye(d)[::-1]
            U = J @ np.linalg.cholesky(J @ reg @ J) @ J
            T = U.conj().T
    except np.linalg.LinAlgError as exc:
        raise RuntimeError("triangular factorization failed after regularization") from exc

    params = TParams(form, n, _params_from_factor(T, form, n))
    err = np.max(np.abs(rho_from_t(params) - reg))
    if err > 1e-8:
        raise RuntimeError(f"seed reconstruction error {err:.2e} exceeds 1e-8")
    region = Region.stable if lam_min >= 0 else Region.clamped
    note = f"ridge mu = {mu:.3e}" + ("" if lam_min >= 0 else f", lambda_min = {lam_min:.3e}")
    return SeedResult(params, region, note)
