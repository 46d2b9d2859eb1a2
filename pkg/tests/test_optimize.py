"""Tests for the budgeted Nelder-Mead search."""

import numpy as np
import pytest

from qbalance.optimize import nelder_mead


def bowl(x):
    return float(((x - np.array([1.0, -2.0, 0.5])) ** 2).sum())


class TestNelderMead:
    def test_converges_on_a_quadratic_bowl(self):
        result = nelder_mead(bowl, np.zeros(3), max_evals=2000)
        assert result.fun <= 1e-10
        np.testing.assert_allclose(result.x, [1.0, -2.0, 0.5], atol=1e-4)

    def test_respects_the_evaluation_budget(self):
        calls = 0

        def counted(x):
            nonlocal calls
            calls += 1
            return bowl(x)

        result = nelder_mead(counted, np.zeros(3), max_evals=25)
        assert calls == 25
        assert result.evaluations == 25

    def test_best_trace_is_non_increasing(self):
        result = nelder_mead(bowl, np.full(3, 5.0), max_evals=300)
        assert np.all(np.diff(result.best_trace) <= 0.0)
        assert result.best_trace[-1] == result.fun

    def test_returns_best_point_ever_seen(self):
        rng = np.random.default_rng(40)

        def noisy(x):
            return bowl(x) + float(rng.uniform(0, 0.1))

        result = nelder_mead(noisy, np.zeros(3), max_evals=200)
        assert result.fun <= min(result.best_trace) + 1e-15

    def test_single_dimension(self):
        result = nelder_mead(lambda x: float((x[0] - 3.0) ** 2), np.zeros(1),
                             max_evals=500)
        assert result.x[0] == pytest.approx(3.0, abs=1e-3)

    def test_handles_valleys_that_force_shrinks(self):
        def rosenbrock(x):
            return float(100.0 * (x[1] - x[0] ** 2) ** 2 + (1.0 - x[0]) ** 2)

        result = nelder_mead(rosenbrock, np.array([-1.2, 1.0]), max_evals=2000)
        assert result.fun <= 1e-6

    def test_deterministic(self):
        a = nelder_mead(bowl, np.ones(3), max_evals=120)
        b = nelder_mead(bowl, np.ones(3), max_evals=120)
        assert a.fun == b.fun
        np.testing.assert_array_equal(a.x, b.x)

    def test_rejects_empty_budget(self):
        with pytest.raises(ValueError):
            nelder_mead(bowl, np.zeros(3), max_evals=0)

    def test_rejects_bad_start(self):
        with pytest.raises(ValueError):
            nelder_mead(bowl, np.zeros((2, 2)))

    def test_flat_objective_found_on_the_first_call(self):
        result = nelder_mead(lambda x: 0.0, np.zeros(4), max_evals=2000)
        assert result.best_trace[0] == 0.0
        assert result.fun == 0.0
