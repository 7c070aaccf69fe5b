import numpy as np
import pytest

from tomofit.simplex import NonFiniteObjectiveError, initial_simplex, nelder_mead


def rosenbrock(x):
    return 100.0 * (x[1] - x[0] ** 2) ** 2 + (1 - x[0]) ** 2


def test_quadratic_bowl():
    c = np.array([1.0, -2.0, 0.5, 3.0])
    res = nelder_mead(lambda x: np.sum((x - c) ** 2), np.zeros(4), f_tol=1e-14)
    assert res.converged
    np.testing.assert_allclose(res.x, c, atol=1e-5)


def test_rosenbrock():
    res = nelder_mead(rosenbrock, np.array([-1.2, 1.0]), f_tol=1e-16, max_iter=5000)
    assert res.converged
    np.testing.assert_allclose(res.x, [1.0, 1.0], atol=1e-5)


def test_descent_is_monotone_and_never_worse_than_start():
    x0 = np.array([-1.2, 1.0])
    res = nelder_mead(rosenbrock, x0, f_tol=1e-12, record_history=True)
    h = np.array(res.history)
    assert np.all(np.diff(h) <= 0)
    assert res.fun <= rosenbrock(x0)


def test_iteration_cap():
    res = nelder_mead(rosenbrock, np.array([-1.2, 1.0]), f_tol=0.0, max_iter=10)
    assert not res.converged
    assert res.iterations == 10


def test_deterministic():
    a = nelder_mead(rosenbrock, np.array([0.3, -0.7]))
    b = nelder_mead(rosenbrock, np.array([0.3, -0.7]))
    assert a.fun == b.fun and np.array_equal(a.x, b.x) and a.iterations == b.iterations


def test_initial_simplex_edge():
    s = initial_simplex(np.array([3.0, 4.0]))
    np.testing.assert_allclose(s, [[3, 4], [3.25, 4], [3, 4.25]])
    s = initial_simplex(np.zeros(3))
    np.testing.assert_allclose(s[1:] - s[0], 0.05 * np.eye(3))


def test_non_finite_objective_reports_point():
    def f(x):
        return np.nan if x[0] > 0.02 else float(x @ x)

    with pytest.raises(NonFiniteObjectiveError) as info:
        nelder_mead(f, np.zeros(2))
    assert info.value.x[0] > 0.02
