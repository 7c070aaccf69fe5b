"""Maximum-likelihood fitting of T-matrix parameters to count data."""

import enum
from dataclasses import dataclass, field

import numpy as np

from .constants import (
    EPSILON_FALLBACK,
    EXPECTED_COUNT_FLOOR,
    FALLBACK_SEED,
    PROBABILITY_FLOOR,
    SIMPLEX_F_TOL,
    SIMPLEX_MAX_ITER_PER_PARAM,
)
from .forms import SINGLE_QUBIT_FORMS, FormId, TParams, rho_from_t, rho_from_vector
from .linalg import fidelity, trace_distance
from .seeding import Region, seed_multiqubit, seed_single
from .simplex import initial_simplex, nelder_mead
from .stokes import linear_inversion, projector_stack, stokes_from_counts


class ObjectiveKind(str, enum.Enum):
    multinomial_nll = "multinomial_nll"
    gaussian_ls = "gaussian_ls"


class Objective:
    """Goodness-of-fit of a state to a fixed :class:`MeasurementSet`.

    ``multinomial_nll`` is the per-setting binomial negative log-likelihood
    with probabilities floored at ``PROBABILITY_FLOOR``; ``gaussian_ls`` is
    the Pearson-weighted least-squares misfit
    ``sum (N p - c)^2 / (2 max(N p, EXPECTED_COUNT_FLOOR))``.
    """

    def __init__(self, data, kind=ObjectiveKind.multinomial_nll):
        self.data = data
        self.kind = ObjectiveKind(kind)
        self.n_qubits = data.n_qubits
        self._proj = projector_stack(data.settings)
        self._counts = data.counts
        self._shots = data.shots

    def probabilities(self, rho):
        return np.einsum("kij,ji->k", self._proj, rho).real

    def of_rho(self, rho):
        rho = np.asarray(rho)
        if rho.shape != self._proj.shape[1:]:
            raise ValueError(f"state shape {rho.shape} does not match the data")
        p = self.probabilities(rho)
        c, N = self._counts, self._shots
        if self.kind is ObjectiveKind.multinomial_nll:
            p = np.clip(p, PROBABILITY_FLOOR, 1.0 - PROBABILITY_FLOOR)
            return float(-np.sum(c * np.log(p) + (N - c) * np.log1p(-p)))
        expected = N * p
        return float(np.sum((expected - c) ** 2 / (2.0 * np.maximum(expected, EXPECTED_COUNT_FLOOR))))

    def of_vector(self, form, t):
        return self.of_rho(rho_from_vector(form, self.n_qubits, t))


def evaluate_objective(obj, p):
    if p.n_qubits != obj.n_qubits:
        raise ValueError(f"parameters are for {p.n_qubits} qubit(s), data for {obj.n_qubits}")
    return obj.of_rho(rho_from_t(p))


@dataclass(frozen=True)
class FitConfig:
    f_tol: float = SIMPLEX_F_TOL
    max_iter: int | None = None  # default SIMPLEX_MAX_ITER_PER_PARAM * 4**n
    rel_step: float = 0.05
    min_step: float = 0.05

    def iteration_cap(self, n_params):
        return self.max_iter if self.max_iter is not None else SIMPLEX_MAX_ITER_PER_PARAM * n_params


@dataclass(frozen=True)
class FitResult:
    form: FormId
    t_hat: TParams
    rho_hat: np.ndarray
    objective_value: float
    iterations: int
    converged: bool
    seed_region: Region
    seed: TParams
    evaluations: int = 0
    objective_kind: ObjectiveKind = ObjectiveKind.multinomial_nll
    notes: tuple = ()


def minimize(obj, seed, cfg=FitConfig(), seed_region=Region.stable, notes=()):
    """Simplex descent in t-space from ``seed``.

    Every iterate maps to a physical state through ``T^H T / Tr``, so the
    search is unconstrained.
    """
    if seed.n_qubits != obj.n_qubits:
        raise ValueError(f"seed is for {seed.n_qubits} qubit(s), data for {obj.n_qubits}")
    form, n = seed.form, seed.n_qubits
    sim = initial_simplex(seed.t, cfg.rel_step, cfg.min_step)
    res = nelder_mead(
        lambda t: obj.of_vector(form, t),
        seed.t,
        f_tol=cfg.f_tol,
        max_iter=cfg.iteration_cap(seed.t.size),
        simplex=sim,
    )
    t_hat = TParams(form, n, res.x)
    return FitResult(
        form=form,
        t_hat=t_hat,
        rho_hat=rho_from_t(t_hat),
        objective_value=res.fun,
        iterations=res.iterations,
        converged=res.converged,
        seed_region=Region(seed_region),
        seed=seed,
        evaluations=res.evaluations,
        objective_kind=obj.kind,
        notes=tuple(notes),
    )


def fit_form(data, form, objective=ObjectiveKind.multinomial_nll, cfg=FitConfig(),
             epsilon=EPSILON_FALLBACK, fallback=FALLBACK_SEED):
    """Seed ``form`` from the data and run :func:`minimize`."""
    form = FormId(form)
    obj = Objective(data, objective)
    if form in SINGLE_QUBIT_FORMS:
        sr = seed_single(stokes_from_counts(data), form, epsilon=epsilon, fallback=fallback)
    else:
        sr = seed_multiqubit(linear_inversion(data), form)
    return minimize(obj, sr.params, cfg, seed_region=sr.region, notes=(sr.notes,))


def fit_with_policy(data, objective=ObjectiveKind.multinomial_nll, cfg=FitConfig(),
                    epsilon=EPSILON_FALLBACK, fallback=FALLBACK_SEED):
    """Single-qubit fit with Form B as primary near s3 = +1 and Form A near s3 = -1.

    If the primary fit does not converge or its seed came from the fallback
    rule, the other form is also fitted and the lower objective wins.
    """
    if data.n_qubits != 1:
        raise ValueError("the A/B policy applies to single-qubit data")
    s = stokes_from_counts(data)
    primary = FormId.B if s.s3 >= 0 else FormId.A
    backup = FormId.A if primary is FormId.B else FormId.B
    kw = dict(objective=objective, cfg=cfg, epsilon=epsilon, fallback=fallback)
    first = fit_form(data, primary, **kw)
    if first.converged and first.seed_region is not Region.fallback:
        return first
    second = fit_form(data, backup, **kw)
    best, other = (second, first) if second.objective_value < first.objective_value else (first, second)
    why = "not converged" if not first.converged else "fallback seed"
    note = (f"primary {primary.value} {why}; backup {backup.value} fitted; "
            f"kept {best.form.value} (objective {best.objective_value:.6g} vs {other.objective_value:.6g})")
    return FitResult(**{**best.__dict__, "notes": best.notes + (note,)})


@dataclass(frozen=True)
class ConsistencyReport:
    fits: list
    pairwise_trace_distance: np.ndarray
    pairwise_fidelity: np.ndarray
    threshold: float
    consistent: bool = field(default=False)

    @property
    def max_trace_distance(self):
        d = self.pairwise_trace_distance
        return float(d.max()) if d.size else 0.0


def default_threshold(data):
    return 3.0 / np.sqrt(float(np.min(data.shots)))


def cross_form_check(data, forms, objective=ObjectiveKind.multinomial_nll, cfg=FitConfig(),
                     threshold=None, epsilon=EPSILON_FALLBACK, fallback=FALLBACK_SEED):
    """Fit every form independently and compare the reconstructed states.

    The data are consistent when every pairwise trace distance is at most
    ``threshold`` (default ``3 / sqrt(min shots)``).
    """
    forms = sorted({FormId(f) for f in forms}, key=lambda f: list(FormId).index(f))
    if not forms:
        raise ValueError("no forms requested")
    if threshold is None:
        threshold = default_threshold(data)
    fits = [fit_form(data, f, objective, cfg, epsilon, fallback) for f in forms]
    k = len(fits)
    td = np.zeros((k, k))
    fid = np.ones((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            td[i, j] = td[j, i] = trace_distance(fits[i].rho_hat, fits[j].rho_hat)
            fid[i, j] = fid[j, i] = fidelity(fits[i].rho_hat, fits[j].rho_hat)
    return ConsistencyReport(fits, td, fid, float(threshold), bool(td.max() <= threshold))
