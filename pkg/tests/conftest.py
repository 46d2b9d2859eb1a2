import numpy as np
import pytest

from qbalance import core
from qbalance.datasets import BUNDLED_PHI, bundled_covariates


@pytest.fixture(scope="session")
def bundled_x() -> core.CovariateSet:
    return bundled_covariates()


@pytest.fixture(scope="session")
def bundled_design(bundled_x) -> core.AugmentedDesign:
    return core.build_augmented(bundled_x, BUNDLED_PHI)


def random_psd(rng: np.random.Generator, m: int) -> core.QusoProblem:
    """A random PSD quadratic form, built as M^T M."""
    m_mat = rng.standard_normal((m, m))
    return core.QusoProblem(m_mat.T @ m_mat)
