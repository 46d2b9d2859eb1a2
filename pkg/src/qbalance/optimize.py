"""Derivative-free simplex minimization with a hard evaluation budget."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["NelderMeadResult", "nelder_mead"]


@dataclass
class NelderMeadResult:
    x: np.ndarray
    fun: float
    evaluations: int
    best_trace: np.ndarray


class _BudgetExhausted(Exception):
    pass


def nelder_mead(fn, x0, max_evals: int = 2000, initial_step: float = 0.25,
                ftol: float = 1e-8, xtol: float = 1e-6) -> NelderMeadResult:
    """Minimize ``fn`` from ``x0`` by the Nelder-Mead simplex method.

    Coefficients use the dimension-adaptive scaling (expansion 1 + 2/d,
    contraction 0.75 - 1/(2d), shrink 1 - 1/d), which degrades far less
    than the classic constants as the dimension grows. The search stops
    when the budget of ``max_evals`` objective calls is spent or the
    simplex has collapsed in both value spread (``ftol``) and diameter
    (``xtol``); value spread alone can stall on points placed
    symmetrically around a minimum. The best point ever evaluated is
    returned, so ``best_trace`` (best value seen after each call) is
    non-increasing by construction.
    """
    x0 = np.asarray(x0, dtype=float)
    if x0.ndim != 1 or x0.size < 1:
        raise ValueError(f"x0 must be a non-empty vector, got shape {x0.shape}")
    if max_evals < 1:
        raise ValueError(f"evaluation budget must be positive, got {max_evals}")
    d = x0.size
    deff = max(d, 2)
    alpha = 1.0
    gamma = 1.0 + 2.0 / deff
    rho = 0.75 - 1.0 / (2.0 * deff)
    sigma = 1.0 - 1.0 / deff

    evaluations = 0
    best_x = x0.copy()
    best_f = np.inf
    trace: list[float] = []

    def evaluate(point: np.ndarray) -> float:
        nonlocal evaluations, best_x, best_f
        if evaluations >= max_evals:
            raise _BudgetExhausted
        value = float(fn(point))
        evaluations += 1
        if value < best_f:
            best_f = value
            best_x = point.copy()
        trace.append(best_f)
        return value

    simplex = np.tile(x0, (d + 1, 1))
    for k in range(d):
        simplex[k + 1, k] += initial_step
    values = np.empty(d + 1)

    try:
        for k in range(d + 1):
            values[k] = evaluate(simplex[k])
        while True:
            order = np.argsort(values, kind="stable")
            simplex, values = simplex[order], values[order]
            if (values[-1] - values[0] <= ftol
                    and np.abs(simplex[1:] - simplex[0]).max() <= xtol):
                break
            centroid = simplex[:-1].mean(axis=0)
            worst, f_worst = simplex[-1], values[-1]

            reflected = centroid + alpha * (centroid - worst)
            f_reflected = evaluate(reflected)
            if values[0] <= f_reflected < values[-2]:
                simplex[-1], values[-1] = reflected, f_reflected
                continue
            if f_reflected < values[0]:
                expanded = centroid + gamma * (reflected - centroid)
                f_expanded = evaluate(expanded)
                if f_expanded < f_reflected:
                    simplex[-1], values[-1] = expanded, f_expanded
                else:
                    simplex[-1], values[-1] = reflected, f_reflected
                continue
            if f_reflected < f_worst:
                contracted = centroid + rho * (reflected - centroid)
                f_contracted = evaluate(contracted)
                if f_contracted <= f_reflected:
                    simplex[-1], values[-1] = contracted, f_contracted
                    continue
            else:
                contracted = centroid - rho * (centroid - worst)
                f_contracted = evaluate(contracted)
                if f_contracted < f_worst:
                    simplex[-1], values[-1] = contracted, f_contracted
                    continue
            # shrink toward the current best point
            for k in range(1, d + 1):
                simplex[k] = simplex[0] + sigma * (simplex[k] - simplex[0])
                values[k] = evaluate(simplex[k])
    except _BudgetExhausted:
        pass

    return NelderMeadResult(x=best_x, fun=best_f, evaluations=evaluations,
                            best_trace=np.asarray(trace))
