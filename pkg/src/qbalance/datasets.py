"""Gaussian-mixture data generation and the bundled worked example.

The bundled dataset holds 12 two-dimensional covariate vectors drawn
evenly from two Gaussian clusters (means [-3, 3] and [3, 3], unit
variance per coordinate). Five reference assignments for it ship
alongside, one per method, together with the imbalance values recorded
for them at phi = 0.5. The ``repro`` subcommand re-evaluates every
reference assignment and reports where a recorded value disagrees with
direct evaluation.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .core import CovariateSet, parse_covariates_csv

__all__ = [
    "GaussianMixtureSpec",
    "gen_data",
    "bundled_covariates",
    "reference_assignment",
    "BUNDLED_DATASET",
    "BUNDLED_PHI",
    "REFERENCE_ASSIGNMENTS",
    "RECORDED_IMBALANCES",
    "RECORDED_OPTIMUM",
]

BUNDLED_DATASET = "two_clusters_12.csv"
BUNDLED_PHI = 0.5

# Reference assignments recorded for the bundled dataset, one per method.
# The vqe and qaoa rows are identical on record, yet carry different
# recorded imbalances; direct evaluation gives 2.4497 for both. The gsw
# row's recorded 2.4720 does not match its own assignment either, which
# evaluates to 2.4517 (a value of 2.4720 is attainable, but by a
# different assignment than the one recorded).
REFERENCE_ASSIGNMENTS: dict[str, tuple[int, ...]] = {
    "random":  (1, 1, 1, 1, -1, 1, -1, -1, 1, -1, 1, -1),
    "gsw":     (1, 1, -1, 1, -1, -1, 1, 1, -1, -1, 1, -1),
    "vqe":     (-1, -1, 1, -1, 1, 1, -1, 1, -1, 1, 1, -1),
    "qaoa":    (-1, -1, 1, -1, 1, 1, -1, 1, -1, 1, 1, -1),
    "optimal": (1, -1, -1, 1, 1, -1, 1, -1, 1, 1, -1, -1),
}

RECORDED_IMBALANCES: dict[str, float] = {
    "gsw": 2.4720,
    "vqe": 2.4497,
    "qaoa": 2.4516,
    "optimal": 2.4496,
}

RECORDED_OPTIMUM = 2.4496


@dataclass
class GaussianMixtureSpec:
    """Even draw of m subjects from Gaussian components with shared sigma."""

    m: int
    means: np.ndarray
    sigma: float = 1.0
    seed: int = 0

    def __post_init__(self):
        means = np.asarray(self.means, dtype=float)
        if means.ndim != 2 or means.shape[0] < 1 or means.shape[1] < 1:
            raise ValueError(f"means must be a k x n array, got shape {means.shape}")
        if not np.all(np.isfinite(means)):
            raise ValueError("component means contain non-finite entries")
        if self.m < means.shape[0] or self.m % means.shape[0] != 0:
            raise ValueError(
                f"m = {self.m} must be a positive multiple of the {means.shape[0]} components")
        if self.sigma < 0:
            raise ValueError(f"sigma must be non-negative, got {self.sigma}")
        self.means = means

    @property
    def components(self) -> int:
        return self.means.shape[0]

    @property
    def n(self) -> int:
        return self.means.shape[1]


def gen_data(spec: GaussianMixtureSpec) -> CovariateSet:
    """Draw m/k subjects per component, deterministically for a seed."""
    rng = np.random.default_rng(spec.seed)
    per_component = spec.m // spec.components
    blocks = [mean + spec.sigma * rng.standard_normal((per_component, spec.n))
              for mean in spec.means]
    return CovariateSet.from_rows(np.vstack(blocks))


def bundled_covariates() -> CovariateSet:
    """Load the packaged 12-subject two-cluster dataset."""
    text = resources.files(__package__).joinpath("data", BUNDLED_DATASET).read_text()
    return parse_covariates_csv(io.StringIO(text), source=BUNDLED_DATASET)


def reference_assignment(method: str) -> np.ndarray:
    """The recorded assignment for ``method`` as a float sign vector."""
    if method not in REFERENCE_ASSIGNMENTS:
        raise KeyError(f"no reference assignment for {method!r}")
    return np.asarray(REFERENCE_ASSIGNMENTS[method], dtype=float)
