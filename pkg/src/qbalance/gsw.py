"""Gram-Schmidt walk sampling of balanced sign assignments.

The walk maintains a fractional assignment z in [-1,1]^m, starting at
zero. Each step picks a pivot among the non-frozen coordinates, builds a
step direction u with u_pivot = 1 whose other live entries minimize
||B u|| (a least-squares solve over the live non-pivot columns of the
augmented matrix), and moves z along +u or -u just far enough to push at
least one coordinate to the boundary. The sign of the move is drawn with
probabilities proportional to the opposite reach, which makes each
coordinate a martingale: E[w_i] = 0 exactly. Coordinates that reach the
boundary freeze at exactly +-1; the walk ends when all are frozen.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import AugmentedDesign

__all__ = ["WalkState", "gsw_sample"]

# floating-point steps land within machine precision of the boundary
FREEZE_TOL = 1e-12

# keeps the live-column Gram matrix invertible when columns are dependent
RIDGE = 1e-12


@dataclass
class WalkState:
    """Fractional assignment of a walk in progress.

    Frozen coordinates hold exactly +-1; live ones lie strictly inside
    (-1, 1). The pivot, when set, is always live.
    """

    z: np.ndarray
    alive: np.ndarray
    pivot: int | None = None


def _step_direction(b: np.ndarray, state: WalkState) -> np.ndarray:
    """u with u_pivot = 1, other live entries minimizing ||B u||, frozen 0."""
    m = b.shape[1]
    u = np.zeros(m)
    u[state.pivot] = 1.0
    others = np.flatnonzero(state.alive & (np.arange(m) != state.pivot))
    if others.size:
        cols = b[:, others]
        gram = cols.T @ cols + RIDGE * np.eye(others.size)
        u[others] = np.linalg.solve(gram, -cols.T @ b[:, state.pivot])
    return u


def _reach(z: np.ndarray, u: np.ndarray) -> tuple[float, float]:
    """Largest delta_plus, delta_minus keeping z +- delta*u inside [-1,1]^m."""
    moving = np.abs(u) > 0.0
    zm, um = z[moving], u[moving]
    plus = np.where(um > 0, (1.0 - zm) / um, (-1.0 - zm) / um)
    minus = np.where(um > 0, (zm + 1.0) / um, (zm - 1.0) / um)
    return float(plus.min()), float(minus.min())


def gsw_sample(design: AugmentedDesign, rng: np.random.Generator) -> np.ndarray:
    """Draw one +-1 assignment from the walk over the augmented matrix.

    Deterministic for a seeded generator. Every step freezes at least one
    coordinate, so the walk takes at most m steps.
    """
    b = design.b
    m = design.m
    state = WalkState(z=np.zeros(m), alive=np.ones(m, dtype=bool))
    steps = 0
    while state.alive.any():
        steps += 1
        if steps > 4 * m:
            raise RuntimeError("walk failed to freeze all coordinates")
        if state.pivot is None:
            live = np.flatnonzero(state.alive)
            state.pivot = int(live[rng.integers(live.size)])
        u = _step_direction(b, state)
        delta_plus, delta_minus = _reach(state.z, u)
        if rng.random() < delta_minus / (delta_plus + delta_minus):
            state.z += delta_plus * u
        else:
            state.z -= delta_minus * u
        hit = np.abs(state.z) >= 1.0 - FREEZE_TOL
        state.z[hit] = np.sign(state.z[hit])
        state.alive &= ~hit
        if state.pivot is not None and hit[state.pivot]:
            state.pivot = None
    return state.z.copy()
