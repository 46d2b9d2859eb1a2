"""Discrepancy and covariate-balance objectives over signed assignments.

The central objects are a set of column vectors x_1..x_m in R^n, a sign
vector w in {-1,+1}^m splitting the vectors into two groups, and the
quadratic forms measuring how unbalanced the split is:

* coloring discrepancy   d(w) = ||sum_i w_i x_i||
* assignment imbalance   i(w) = ||B w||, where the augmented matrix B
  stacks sqrt(phi)*I on xi^-1*sqrt(1-phi)*X and phi in [0, 1] trades
  covariate balance (phi=0) against assignment robustness (phi=1).

Both objectives are quadratic forms w^T Q w with Q positive semidefinite
(Q = X^T X and Q = B^T B respectively), so they share one minimization
pipeline: the exhaustive scan here, the diagonal Ising encoding in
`ising`, and the variational solvers in `vqa`.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "CovariateSet",
    "AugmentedDesign",
    "QusoProblem",
    "SearchResult",
    "BoundCheck",
    "as_signs",
    "coloring_discrepancy",
    "build_gram",
    "build_augmented",
    "augmented_gram",
    "assignment_imbalance",
    "quso_objective",
    "exhaustive_search",
    "unit_ball_bound_holds",
    "uniform_random_assignment",
    "save_covariates_csv",
    "load_covariates_csv",
]

SYMMETRY_TOL = 1e-9
PSD_TOL = 1e-9
MAX_EXHAUSTIVE_SUBJECTS = 30


@dataclass
class CovariateSet:
    """Column vectors x_1..x_m stored as an n x m matrix.

    Column i holds the n covariates of subject i. Data files store the
    transpose (one subject per row), so use :meth:`from_rows` or
    :func:`load_covariates_csv` when reading those.
    """

    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        if x.ndim != 2:
            raise ValueError(f"covariate matrix must be 2-D, got shape {x.shape}")
        if x.shape[0] < 1 or x.shape[1] < 1:
            raise ValueError("covariate matrix needs at least one row and one column")
        if not np.all(np.isfinite(x)):
            raise ValueError("covariate matrix contains non-finite entries")
        self.x = x

    @property
    def m(self) -> int:
        """Number of subjects (columns)."""
        return self.x.shape[1]

    @property
    def n(self) -> int:
        """Covariate dimension (rows)."""
        return self.x.shape[0]

    @classmethod
    def from_rows(cls, rows) -> "CovariateSet":
        """Build from an m x n array holding one subject per row."""
        return cls(np.asarray(rows, dtype=float).T)

    def column_norms(self) -> np.ndarray:
        return np.linalg.norm(self.x, axis=0)


@dataclass
class AugmentedDesign:
    """The (m+n) x m matrix B = [sqrt(phi)*I ; xi^-1*sqrt(1-phi)*X].

    xi is the largest column norm of X, so every column of B has norm
    at most 1: ||b_i||^2 = phi + (1-phi)*xi^-2*||x_i||^2.
    """

    base: CovariateSet
    phi: float
    xi: float
    b: np.ndarray

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def n(self) -> int:
        return self.base.n


@dataclass
class QusoProblem:
    """Minimize w^T q w over sign vectors w in {-1,+1}^m.

    q must be symmetric positive semidefinite; it is symmetrized on
    construction and rejected if asymmetric beyond ``SYMMETRY_TOL`` or
    with an eigenvalue below ``-PSD_TOL``.
    """

    q: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise ValueError(f"q must be a square matrix, got shape {q.shape}")
        if not np.all(np.isfinite(q)):
            raise ValueError("q contains non-finite entries")
        asym = float(np.abs(q - q.T).max())
        if asym > SYMMETRY_TOL:
            raise ValueError(f"q is not symmetric: max |q - q^T| = {asym:.3e}")
        q = (q + q.T) / 2.0
        smallest = float(np.linalg.eigvalsh(q).min())
        if smallest < -PSD_TOL:
            raise ValueError(f"q is not positive semidefinite: min eigenvalue {smallest:.3e}")
        self.q = q

    @property
    def size(self) -> int:
        return self.q.shape[0]

    @property
    def trace_offset(self) -> float:
        """The constant tr(q), split off by the Ising encoding."""
        return float(np.trace(self.q))


class SearchResult(NamedTuple):
    min_value: float
    argmin: np.ndarray


class BoundCheck(NamedTuple):
    bound: float
    satisfied: bool
    disc: float


def as_signs(w, m: int | None = None) -> np.ndarray:
    """Validate a sign vector and return it as a float array.

    Entries must be exactly -1 or +1; when ``m`` is given the length must
    match.
    """
    w = np.asarray(w, dtype=float)
    if w.ndim != 1:
        raise ValueError(f"assignment must be one-dimensional, got shape {w.shape}")
    if not np.all(np.abs(w) == 1.0):
        raise ValueError("assignment entries must be exactly -1 or +1")
    if m is not None and w.size != m:
        raise ValueError(f"assignment has length {w.size}, expected {m}")
    return w


def coloring_discrepancy(x: CovariateSet, w) -> float:
    """Euclidean norm of the signed column sum, ||sum_i w_i x_i||."""
    w = as_signs(w, x.m)
    return float(np.linalg.norm(x.x @ w))


def build_gram(x: CovariateSet) -> QusoProblem:
    """Gram matrix X^T X, whose quadratic form is the squared discrepancy."""
    return QusoProblem(x.x.T @ x.x)


def build_augmented(x: CovariateSet, phi: float) -> AugmentedDesign:
    """Stack sqrt(phi)*I on xi^-1*sqrt(1-phi)*X with xi = max_i ||x_i||.

    For an all-zero X the scale xi would vanish; it falls back to 1 so
    the design degenerates cleanly to the pure-identity block.
    """
    if not 0.0 <= phi <= 1.0:
        raise ValueError(f"phi must lie in [0, 1], got {phi}")
    xi = float(x.column_norms().max())
    if xi == 0.0:
        xi = 1.0
    b = np.vstack([np.sqrt(phi) * np.eye(x.m), (np.sqrt(1.0 - phi) / xi) * x.x])
    return AugmentedDesign(base=x, phi=float(phi), xi=xi, b=b)


def augmented_gram(d: AugmentedDesign) -> QusoProblem:
    """Gram matrix B^T B = phi*I + (1-phi)*xi^-2*X^T X."""
    return QusoProblem(d.b.T @ d.b)


def assignment_imbalance(d: AugmentedDesign, w) -> float:
    """Euclidean norm of the signed column sum of the augmented matrix.

    Equals sqrt(phi*m + (1-phi)*xi^-2*||X w||^2), hence never drops below
    sqrt(phi*m).
    """
    w = as_signs(w, d.m)
    return float(np.linalg.norm(d.b @ w))


def quso_objective(p: QusoProblem, w) -> float:
    """The quadratic form w^T q w."""
    w = as_signs(w, p.size)
    return float(w @ p.q @ w)


def _signs_from_indices(idx: np.ndarray, m: int) -> np.ndarray:
    """Decode enumeration indices into sign rows with w_0 fixed to +1.

    Bit (m-1-pos) of the index marks position pos as -1, so ascending
    indices walk the sign vectors in lexicographic order with +1 sorted
    before -1.
    """
    out = np.empty((idx.size, m))
    out[:, 0] = 1.0
    for pos in range(1, m):
        out[:, pos] = 1.0 - 2.0 * ((idx >> (m - 1 - pos)) & 1)
    return out


def exhaustive_search(p: QusoProblem, equal_split: bool = False,
                      chunk: int = 1 << 16) -> SearchResult:
    """Scan sign vectors for the minimum of w^T q w.

    The form is invariant under w -> -w, so the scan fixes w_0 = +1 and
    enumerates 2^(m-1) vectors; the reported argmin may therefore be the
    global flip of other references. Ties break to the first minimizer in
    enumeration order. With ``equal_split`` only vectors holding exactly
    m/2 entries of +1 are scanned (m must be even); flipping preserves
    that property, so the pruning stays exhaustive.
    """
    m = p.size
    if m > MAX_EXHAUSTIVE_SUBJECTS:
        raise ValueError(
            f"exhaustive search supports at most {MAX_EXHAUSTIVE_SUBJECTS} subjects, got {m}")
    if equal_split and m % 2 != 0:
        raise ValueError(f"equal split requires an even number of subjects, got {m}")
    q = p.q
    total = 1 << (m - 1)
    best_value = np.inf
    best_index = 0
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        if equal_split:
            # set bits mark -1 entries among positions 1..m-1
            idx = idx[np.bitwise_count(idx) == m // 2]
            if idx.size == 0:
                continue
        w = _signs_from_indices(idx, m)
        values = ((w @ q) * w).sum(axis=1)
        k = int(np.argmin(values))
        if values[k] < best_value:
            best_value = float(values[k])
            best_index = int(idx[k])
    argmin = _signs_from_indices(np.array([best_index], dtype=np.int64), m)[0]
    return SearchResult(min_value=best_value, argmin=argmin)


def unit_ball_bound_holds(x: CovariateSet) -> BoundCheck:
    """Check disc(X) <= sqrt(n) for columns inside the unit ball.

    The sqrt(n) guarantee from vector-balancing theory assumes every
    column lies in the unit ball; columns longer than 1 raise. The exact
    discrepancy comes from the exhaustive scan.
    """
    norms = x.column_norms()
    if np.any(norms > 1.0 + 1e-12):
        raise ValueError(
            f"unit-ball hypothesis violated: max column norm {float(norms.max()):.6f} > 1")
    result = exhaustive_search(build_gram(x))
    disc = float(np.sqrt(max(result.min_value, 0.0)))
    bound = float(np.sqrt(x.n))
    return BoundCheck(bound=bound, satisfied=bool(disc <= bound + 1e-9), disc=disc)


def uniform_random_assignment(m: int, rng: np.random.Generator) -> np.ndarray:
    """Independent fair +-1 entries; deterministic for a seeded generator."""
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    return rng.integers(0, 2, size=m) * 2.0 - 1.0


def save_covariates_csv(x: CovariateSet, path) -> None:
    """Write one subject per row under the header x1,...,xn."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"x{j + 1}" for j in range(x.n)])
        for row in x.x.T:
            writer.writerow([repr(float(v)) for v in row])


def parse_covariates_csv(lines, source: str = "<covariates>") -> CovariateSet:
    """Parse the subject-per-row CSV format from an iterable of lines."""
    reader = csv.reader(lines)
    header = next(reader, None)
    if header is None:
        raise ValueError(f"{source}: empty covariate file")
    expected = [f"x{j + 1}" for j in range(len(header))]
    if [h.strip() for h in header] != expected:
        raise ValueError(f"{source}: header must be x1,...,xn, got {header}")
    rows = []
    for lineno, fields in enumerate(reader, start=2):
        if not fields:
            continue
        if len(fields) != len(header):
            raise ValueError(
                f"{source}:{lineno}: expected {len(header)} fields, got {len(fields)}")
        try:
            rows.append([float(v) for v in fields])
        except ValueError:
            raise ValueError(f"{source}:{lineno}: non-numeric field in {fields}") from None
    if not rows:
        raise ValueError(f"{source}: no data rows")
    return CovariateSet.from_rows(rows)


def load_covariates_csv(path) -> CovariateSet:
    """Read a covariate CSV file back into column storage."""
    with open(path, newline="") as fh:
        return parse_covariates_csv(fh, source=str(path))
