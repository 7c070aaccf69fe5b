"""Stokes parameters, projective measurements and count data.

The measurement alphabet is the six Pauli eigenstates per qubit::

    H = |0>          V = |1>           (sigma_z = +1 / -1)
    D = |0> + |1>    A = |0> - |1>     (sigma_x = +1 / -1)
    R = |0> + i|1>   L = |0> - i|1>    (sigma_y = +1 / -1)

An n-qubit setting is a word over this alphabet (``"HD"`` is H on the first
qubit and D on the second, first qubit most significant).
"""

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache, reduce

import numpy as np

from .constants import STOKES_NORM_TOL

ALPHABET = "HVDARL"
COMPLEMENT = {"H": "V", "V": "H", "D": "A", "A": "D", "R": "L", "L": "R"}

_S = 1.0 / np.sqrt(2.0)
_KETS = {
    "H": np.array([1.0, 0.0], dtype=complex),
    "V": np.array([0.0, 1.0], dtype=complex),
    "D": np.array([_S, _S], dtype=complex),
    "A": np.array([_S, -_S], dtype=complex),
    "R": np.array([_S, 1j * _S], dtype=complex),
    "L": np.array([_S, -1j * _S], dtype=complex),
}

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
# measurement basis for each Pauli, as (+1 label, -1 label)
_PAULI_BASIS = {"X": ("D", "A"), "Y": ("R", "L"), "Z": ("H", "V")}


class UnphysicalStateError(ValueError):
    """Raised when a Stokes vector lies outside the Bloch ball."""


@dataclass(frozen=True)
class StokesVector:
    """Normalized single-qubit Stokes parameters.

    ``clamped`` records that the vector was radially rescaled from a raw
    estimate lying outside the unit ball.
    """

    s1: float
    s2: float
    s3: float
    clamped: bool = False

    def __post_init__(self):
        for name in ("s1", "s2", "s3"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise UnphysicalStateError(f"{name} is not finite")
            object.__setattr__(self, name, v)
        if self.norm > 1.0 + STOKES_NORM_TOL:
            raise UnphysicalStateError(
                f"Stokes vector {self.as_array()} has norm {self.norm:.6g} > 1"
            )

    @classmethod
    def from_raw(cls, s1, s2, s3):
        """Build from a raw estimate, radially clamping it onto the unit ball."""
        raw = np.array([s1, s2, s3], dtype=float)
        if not np.all(np.isfinite(raw)):
            raise UnphysicalStateError("raw Stokes estimate is not finite")
        r = float(np.linalg.norm(raw))
        if r > 1.0 + STOKES_NORM_TOL:
            raw = raw / r
            return cls(*raw, clamped=True)
        return cls(*raw)

    @property
    def norm(self):
        return math.sqrt(self.s1**2 + self.s2**2 + self.s3**2)

    def as_array(self):
        return np.array([self.s1, self.s2, self.s3])


@dataclass(frozen=True)
class MeasurementRecord:
    """One projector setting with its detected count out of ``shots`` trials.

    ``count`` is normally an integer; non-integral expected counts are
    accepted so that noiseless data sets can be represented exactly.
    """

    setting: str
    count: float
    shots: int

    def __post_init__(self):
        if not self.setting or any(ch not in ALPHABET for ch in self.setting):
            raise ValueError(f"unknown setting label {self.setting!r}")
        if not np.isfinite(self.count) or self.count < 0:
            raise ValueError(f"{self.setting}: count must be non-negative, got {self.count}")
        if int(self.shots) != self.shots or self.shots <= 0:
            raise ValueError(f"{self.setting}: shots must be a positive integer")
        if self.count > self.shots:
            raise ValueError(f"{self.setting}: count {self.count} exceeds shots {self.shots}")

    @property
    def frequency(self):
        return self.count / self.shots


@dataclass(frozen=True)
class MeasurementSet:
    n_qubits: int
    records: tuple = field(default_factory=tuple)
    partial: bool = False

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        if int(self.n_qubits) != self.n_qubits or self.n_qubits < 1:
            raise ValueError("n_qubits must be a positive integer")
        labels = [r.setting for r in self.records]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate setting labels")
        for label in labels:
            if len(label) != self.n_qubits:
                raise ValueError(f"setting {label!r} does not match {self.n_qubits} qubit(s)")
        missing = set(all_settings(self.n_qubits)) - set(labels)
        if missing and not self.partial:
            raise ValueError(f"incomplete setting set, missing {sorted(missing)}")

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    @property
    def settings(self):
        return [r.setting for r in self.records]

    @property
    def counts(self):
        return np.array([r.count for r in self.records], dtype=float)

    @property
    def shots(self):
        return np.array([r.shots for r in self.records], dtype=float)

    def by_setting(self):
        return {r.setting: r for r in self.records}


def all_settings(n_qubits):
    return ["".join(w) for w in itertools.product(ALPHABET, repeat=n_qubits)]


@lru_cache(maxsize=None)
def projector(setting):
    """Rank-1 projector for a setting word such as ``"H"`` or ``"DR"``."""
    if not setting or any(ch not in _KETS for ch in setting):
        raise ValueError(f"unknown setting label {setting!r}")
    ket = reduce(np.kron, [_KETS[ch] for ch in setting])
    P = np.outer(ket, ket.conj())
    P.setflags(write=False)
    return P


def projector_stack(settings):
    return np.stack([projector(s) for s in settings])


def rho_from_stokes(s):
    """Single-qubit density matrix ``(I + s1 X + s2 Y + s3 Z) / 2``."""
    if not isinstance(s, StokesVector):
        s = StokesVector(*s)
    return 0.5 * np.array(
        [[1.0 + s.s3, s.s1 - 1j * s.s2], [s.s1 + 1j * s.s2, 1.0 - s.s3]],
        dtype=complex,
    )


def stokes_from_rho(rho):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"expected a 2x2 density matrix, got shape {rho.shape}")
    return StokesVector(
        2.0 * rho[1, 0].real,
        2.0 * rho[1, 0].imag,
        (rho[0, 0] - rho[1, 1]).real,
    )


def born_probabilities(rho, settings):
    """Outcome probabilities ``Tr(rho P)`` for each setting label."""
    rho = np.asarray(rho, dtype=complex)
    settings = list(settings)
    for s in settings:
        if 2 ** len(s) != rho.shape[0]:
            raise ValueError(f"setting {s!r} does not match a {rho.shape[0]}-dim state")
    P = projector_stack(settings)
    return np.clip(np.einsum("kij,ji->k", P, rho).real, 0.0, 1.0)


def stokes_from_counts(m):
    """Estimate single-qubit Stokes parameters from count frequencies.

    ``s1 = f_D - f_A``, ``s2 = f_R - f_L``, ``s3 = f_H - f_V``. An estimate
    pushed outside the unit ball by sampling noise is rescaled onto it and
    flagged as clamped.
    """
    if m.n_qubits != 1:
        raise ValueError("Stokes estimation needs single-qubit data")
    rec = m.by_setting()
    missing = [ch for ch in ALPHABET if ch not in rec]
    if missing:
        raise ValueError(f"missing settings {missing}")
    f = {ch: rec[ch].frequency for ch in ALPHABET}
    return StokesVector.from_raw(f["D"] - f["A"], f["R"] - f["L"], f["H"] - f["V"])


def expected_counts(rho, shots_per_setting, n_qubits=None):
    """Noiseless data set with ``count = shots * p`` for every setting."""
    rho = np.asarray(rho, dtype=complex)
    n = n_qubits or int(round(np.log2(rho.shape[0])))
    settings = all_settings(n)
    p = born_probabilities(rho, settings)
    records = [
        MeasurementRecord(s, float(shots_per_setting * pv), int(shots_per_setting))
        for s, pv in zip(settings, p)
    ]
    return MeasurementSet(n, records)


def sample_counts(rho, shots_per_setting, seed):
    """Binomially sampled counts for all ``6**n`` settings.

    Draws are taken in setting order from ``numpy.random.default_rng(seed)``,
    so the output is reproducible for a fixed seed and numpy version.
    """
    rho = np.asarray(rho, dtype=complex)
    n = int(round(np.log2(rho.shape[0])))
    if 2**n != rho.shape[0]:
        raise ValueError("state dimension is not a power of two")
    settings = all_settings(n)
    p = born_probabilities(rho, settings)
    rng = np.random.default_rng(seed)
    counts = rng.binomial(int(shots_per_setting), p)
    records = [
        MeasurementRecord(s, int(c), int(shots_per_setting)) for s, c in zip(settings, counts)
    ]
    return MeasurementSet(n, records)


def linear_inversion(m):
    """Unconstrained state estimate from frequencies.

    Each Pauli expectation is the signed sum of frequencies over the outcomes
    of its measurement basis; identity factors are averaged over all three
    bases. The result is Hermitian and unit-trace but may have small negative
    eigenvalues.
    """
    n = m.n_qubits
    f = {r.setting: r.frequency for r in m.records}
    rho = np.zeros((2**n, 2**n), dtype=complex)
    for paulis in itertools.product("IXYZ", repeat=n):
        op = reduce(np.kron, [PAULI[c] for c in paulis])
        if set(paulis) == {"I"}:
            rho += op
            continue
        choices = [(_PAULI_BASIS[c],) if c != "I" else tuple(_PAULI_BASIS.values()) for c in paulis]
        estimates = []
        for bases in itertools.product(*choices):
            total = 0.0
            for outcome in itertools.product((0, 1), repeat=n):
                label = "".join(b[o] for b, o in zip(bases, outcome))
                sign = 1
                for c, o in zip(paulis, outcome):
                    if c != "I" and o == 1:
                        sign = -sign
                total += sign * f[label]
            estimates.append(total)
        rho += np.mean(estimates) * op
    rho /= 2**n
    return 0.5 * (rho + rho.conj().T)


def is_physical(s, tol=STOKES_NORM_TOL):
    return float(np.linalg.norm(np.asarray(s, dtype=float))) <= 1.0 + tol


__all__ = [
    "ALPHABET",
    "COMPLEMENT",
    "MeasurementRecord",
    "MeasurementSet",
    "StokesVector",
    "UnphysicalStateError",
    "all_settings",
    "born_probabilities",
    "expected_counts",
    "is_physical",
    "linear_inversion",
    "projector",
    "rho_from_stokes",
    "sample_counts",
    "stokes_from_counts",
    "stokes_from_rho",
]
