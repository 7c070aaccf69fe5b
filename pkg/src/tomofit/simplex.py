"""Derivative-free Nelder-Mead simplex minimizer."""

from dataclasses import dataclass

import numpy as np


class NonFiniteObjectiveError(FloatingPointError):
    def __init__(self, x, value):
        super().__init__(f"objective returned {value!r} at x = {np.array2string(np.asarray(x))}")
        self.x = np.array(x, copy=True)
        self.value = value


@dataclass
class SimplexResult:
    x: np.ndarray
    fun: float
    iterations: int
    evaluations: int
    converged: bool
    history: list


def initial_simplex(x0, rel_step=0.05, min_step=0.05):
    """Right-angled simplex with edge ``max(min_step, rel_step * ||x0||)``."""
    x0 = np.asarray(x0, dtype=float)
    step = max(min_step, rel_step * float(np.linalg.norm(x0)))
    return np.vstack([x0, x0 + step * np.eye(x0.size)])


def nelder_mead(
    func,
    x0,
    f_tol=1e-10,
    max_iter=20_000,
    simplex=None,
    alpha=1.0,
    gamma=2.0,
    rho=0.5,
    sigma=0.5,
    record_history=False,
):
    """Minimize ``func`` from ``x0`` with the standard simplex moves.

    Iteration stops when the spread ``f_worst - f_best`` across the simplex
    falls below ``f_tol`` (converged) or after ``max_iter`` iterations (not
    converged). ``x0`` is a vertex of the starting simplex, so the returned
    value never exceeds ``func(x0)``.

    Raises:
        NonFiniteObjectiveError: if ``func`` returns NaN or infinity.
    """

    def f(x):
        v = float(func(x))
        if not np.isfinite(v):
            raise NonFiniteObjectiveError(x, v)
        return v

    sim = initial_simplex(x0) if simplex is None else np.array(simplex, dtype=float)
    n = sim.shape[1]
    fsim = np.array([f(x) for x in sim])
    nfev = len(fsim)
    history = []

    converged = False
    it = 0
    while it < max_iter:
        order = np.argsort(fsim, kind="stable")
        sim, fsim = sim[order], fsim[order]
        if record_history:
            history.append(fsim[0])
        if fsim[-1] - fsim[0] < f_tol:
            converged = True
            break
        # degenerate simplex: vertices coincide to machine precision
        if np.max(np.abs(sim[1:] - sim[0])) <= 1e-15 * (1.0 + np.max(np.abs(sim[0]))):
            converged = True
            break
        it += 1

        centroid = sim[:-1].mean(axis=0)
        xr = centroid + alpha * (centroid - sim[-1])
        fr = f(xr)
        nfev += 1
        if fr < fsim[0]:
            xe = centroid + gamma * (xr - centroid)
            fe = f(xe)
            nfev += 1
            if fe < fr:
                sim[-1], fsim[-1] = xe, fe
            else:
                sim[-1], fsim[-1] = xr, fr
            continue
        if fr < fsim[-2]:
            sim[-1], fsim[-1] = xr, fr
            continue
        if fr < fsim[-1]:
            xc = centroid + rho * (xr - centroid)
        else:
            xc = centroid + rho * (sim[-1] - centroid)
        fc = f(xc)
        nfev += 1
        if fc < min(fr, fsim[-1]):
            sim[-1], fsim[-1] = xc, fc
            continue
        sim[1:] = sim[0] + sigma * (sim[1:] - sim[0])
        fsim[1:] = [f(x) for x in sim[1:]]
        nfev += n

    order = np.argsort(fsim, kind="stable")
    return SimplexResult(
        x=sim[order[0]].copy(),
        fun=float(fsim[order[0]]),
        iterations=it,
        evaluations=nfev,
        converged=converged,
        history=history,
    )
