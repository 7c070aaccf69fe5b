"""T-matrix parameterizations of density matrices.

Every form maps a real parameter vector ``t`` to a complex matrix ``T`` and
then to the state ``rho = T^H T / Tr(T^H T)``, which is Hermitian, positive
semidefinite and unit-trace for any non-zero ``t``. Parameter labels are
1-based in the docstrings (``t1`` is ``t[0]``).

Single-qubit layouts::

    A  [[t1, 0      ], [t3+i t4, t2]]
    B  [[t2, t3+i t4], [0,       t1]]
    C  [[0,  t1     ], [t3+i t4, t2]]
    D  [[t2, t3+i t4], [t1,      0 ]]

``B_multi`` is the upper-triangular n-qubit generalization of B and
``A_multi`` its lower-triangular mirror; at ``n = 1`` they reduce to B and A.
"""

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class FormId(str, enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    A_multi = "A_multi"
    B_multi = "B_multi"

    @property
    def single_qubit_only(self):
        return self in (FormId.C, FormId.D)


SINGLE_QUBIT_FORMS = (FormId.A, FormId.B, FormId.C, FormId.D)
MULTI_QUBIT_FORMS = (FormId.A_multi, FormId.B_multi)


def param_count(n_qubits):
    """Number of real parameters needed for ``n_qubits`` qubits (``4**n``)."""
    if int(n_qubits) != n_qubits or n_qubits < 1:
        raise ValueError(f"n_qubits must be a positive integer, got {n_qubits!r}")
    return 4 ** int(n_qubits)


@dataclass(frozen=True)
class TParams:
    """A form together with its real parameter vector."""

    form: FormId
    n_qubits: int
    t: np.ndarray

    def __post_init__(self):
        form = FormId(self.form)
        object.__setattr__(self, "form", form)
        t = np.array(self.t, dtype=float).ravel()
        t.setflags(write=False)
        object.__setattr__(self, "t", t)
        if form.single_qubit_only and self.n_qubits != 1:
            raise ValueError(f"form {form.value} is defined only for one qubit")
        if form in (FormId.A, FormId.B) and self.n_qubits != 1:
            raise ValueError(f"form {form.value} is single-qubit; use {form.value}_multi")
        if t.size != param_count(self.n_qubits):
            raise ValueError(
                f"expected {param_count(self.n_qubits)} parameters for "
                f"{self.n_qubits} qubit(s), got {t.size}"
            )
        if not np.all(np.isfinite(t)):
            raise ValueError("parameters must be finite")
        if not np.any(t):
            raise ValueError("parameter vector is identically zero")

    @property
    def dim(self):
        return 2 ** self.n_qubits

    def scaled(self, c):
        return TParams(self.form, self.n_qubits, c * self.t)


@lru_cache(maxsize=None)
def _triangular_layout(n_qubits, upper):
    """Index arrays placing ``t`` into a triangular ``2**n`` square matrix.

    Returns ``(rows, cols, re_idx, im_idx)`` with ``im_idx = -1`` on the
    (real) diagonal.
    """
    d = 2 ** n_qubits
    rows, cols, re_idx, im_idx = [], [], [], []
    for k in range(d):
        rows.append(k)
        cols.append(k)
        # upper: t_{d}, ..., t_1 down the diagonal; lower: t_1, ..., t_d
        re_idx.append(d - 1 - k if upper else k)
        im_idx.append(-1)
    nxt = d
    for offset in range(1, d):
        for r in range(d - offset):
            if upper:
                rows.append(r)
                cols.append(r + offset)
            else:
                rows.append(r + offset)
                cols.append(r)
            re_idx.append(nxt)
            im_idx.append(nxt + 1)
            nxt += 2
    return tuple(np.array(x, dtype=int) for x in (rows, cols, re_idx, im_idx))


# (row, col, real index, imaginary index or -1), 0-based parameter indices
_SINGLE_LAYOUTS = {
    FormId.A: ((0, 0, 0, -1), (1, 0, 2, 3), (1, 1, 1, -1)),
    FormId.B: ((0, 0, 1, -1), (0, 1, 2, 3), (1, 1, 0, -1)),
    FormId.C: ((0, 1, 0, -1), (1, 0, 2, 3), (1, 1, 1, -1)),
    FormId.D: ((0, 0, 1, -1), (0, 1, 2, 3), (1, 0, 0, -1)),
}


@lru_cache(maxsize=None)
def _layout(form, n_qubits):
    if form in _SINGLE_LAYOUTS:
        return tuple(np.array(col, dtype=int) for col in zip(*_SINGLE_LAYOUTS[form]))
    return _triangular_layout(n_qubits, upper=form is FormId.B_multi)


def _build(form, n_qubits, t):
    rows, cols, re_idx, im_idx = _layout(form, n_qubits)
    d = 2**n_qubits
    T = np.zeros((d, d), dtype=complex)
    t_ext = np.zeros(len(t) + 1)  # index -1 reads the trailing zero
    t_ext[:-1] = t
    T[rows, cols] = t_ext[re_idx] + 1j * t_ext[im_idx]
    return T


def build_T(p):
    """Lay the parameters of ``p`` out as the complex T-matrix of its form."""
    return _build(p.form, p.n_qubits, p.t)


def rho_from_vector(form, n_qubits, t):
    """Unvalidated fast path of :func:`rho_from_t` for optimizer inner loops.

    A zero vector yields NaN entries instead of raising.
    """
    T = _build(form, n_qubits, t)
    gram = T.conj().T @ T
    diag = (T.real**2 + T.imag**2).sum(axis=0)
    np.fill_diagonal(gram, diag)
    tr = diag.sum()
    # real/imaginary parts divided separately so that degenerate states stay exact
    with np.errstate(invalid="ignore", divide="ignore"):
        rho = np.empty_like(gram)
        rho.real = gram.real / tr
        rho.imag = gram.imag / tr
    return rho


def rho_from_t(p):
    """Density matrix ``T^H T / Tr(T^H T)`` for the parameters ``p``."""
    return rho_from_vector(p.form, p.n_qubits, p.t)


def closed_form_rho(form, t):
    """Explicit single-qubit density matrix for ``form``, without a matrix product."""
    form = FormId(form)
    t1, t2, t3, t4 = (float(x) for x in np.asarray(t, dtype=float).ravel())
    norm = t1 * t1 + t2 * t2 + t3 * t3 + t4 * t4
    if norm == 0.0:
        raise ValueError("parameter vector is identically zero")
    z = t3 + 1j * t4
    zc = t3 - 1j * t4
    if form is FormId.A:
        m = [[t1**2 + t3**2 + t4**2, t2 * zc], [t2 * z, t2**2]]
    elif form is FormId.B:
        m = [[t2**2, t2 * z], [t2 * zc, t1**2 + t3**2 + t4**2]]
    elif form is FormId.C:
        m = [[t3**2 + t4**2, t2 * zc], [t2 * z, t1**2 + t2**2]]
    elif form is FormId.D:
        m = [[t1**2 + t2**2, t2 * z], [t2 * zc, t3**2 + t4**2]]
    else:
        raise ValueError(f"no closed form for {form.value}")
    return np.array(m, dtype=complex) / norm
