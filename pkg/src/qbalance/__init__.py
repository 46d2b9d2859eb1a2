"""Covariate balancing and Euclidean discrepancy via Ising encodings.

The package frames both objectives as one quadratic minimization over
sign vectors, encodes that as a diagonal two-body Ising Hamiltonian, and
solves it with simulated variational circuits (a two-local ansatz and
the alternating cost/mixer construction), the Gram-Schmidt walk, an
exhaustive scan, and a uniform-random baseline. See the `cli` module or
the ``qbalance`` entry point for the command-line surface.
"""

from .core import (AugmentedDesign, BoundCheck, CovariateSet, QusoProblem,
                   SearchResult, assignment_imbalance, augmented_gram,
                   build_augmented, build_gram, coloring_discrepancy,
                   exhaustive_search, load_covariates_csv, quso_objective,
                   save_covariates_csv, uniform_random_assignment,
                   unit_ball_bound_holds)
from .datasets import GaussianMixtureSpec, bundled_covariates, gen_data
from .gsw import gsw_sample
from .ising import (IsingHamiltonian, eigenvalue_of, eigenvalue_table,
                    from_quso, min_eigenpair_bruteforce)
from .qsim import (Circuit, apply, basis_state, expectation_diagonal,
                   sample_shots, uniform_state, zero_state)
from .vqa import (OptimizerConfig, QaoaConfig, RunResult, TwoLocalConfig,
                  build_qaoa, build_two_local, minimize_expectation, run_qaoa,
                  run_vqe)

__version__ = "0.1.0"

__all__ = [
    "AugmentedDesign", "BoundCheck", "CovariateSet", "QusoProblem",
    "SearchResult", "assignment_imbalance", "augmented_gram",
    "build_augmented", "build_gram", "coloring_discrepancy",
    "exhaustive_search", "load_covariates_csv", "quso_objective",
    "save_covariates_csv", "uniform_random_assignment",
    "unit_ball_bound_holds",
    "GaussianMixtureSpec", "bundled_covariates", "gen_data",
    "gsw_sample",
    "IsingHamiltonian", "eigenvalue_of", "eigenvalue_table", "from_quso",
    "min_eigenpair_bruteforce",
    "Circuit", "apply", "basis_state", "expectation_diagonal",
    "sample_shots", "uniform_state", "zero_state",
    "OptimizerConfig", "QaoaConfig", "RunResult", "TwoLocalConfig",
    "build_qaoa", "build_two_local", "minimize_expectation", "run_qaoa",
    "run_vqe",
    "__version__",
]
