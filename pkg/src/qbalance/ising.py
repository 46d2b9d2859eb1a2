"""Diagonal Ising encodings of sign-vector quadratic forms.

A quadratic objective w^T Q w over w in {-1,+1}^m maps, once the
constant tr(Q) is set aside, onto the two-body Hamiltonian

    H = 2 * sum_{i<j} Q_ij Z_i Z_j,

which is diagonal in the computational product basis: the basis state
|y> with bits y_i = (w_i + 1)/2 is an eigenvector with eigenvalue
w^T Q w - tr(Q). Minimizing the quadratic form and finding the minimum
eigenvalue of H are therefore the same problem, and the map between
sign vectors and basis states below is the dictionary the variational
solvers use to turn sampled bitstrings back into assignments.

Basis indices put qubit 0 at the most significant bit, so bit k of an
index is the bit y_k of the outcome.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .core import QusoProblem, as_signs

__all__ = [
    "IsingHamiltonian",
    "EigenResult",
    "from_quso",
    "as_bits",
    "assignment_to_outcome",
    "outcome_to_assignment",
    "outcome_to_index",
    "index_to_outcome",
    "eigenvalue_of",
    "eigenvalue_table",
    "min_eigenpair_bruteforce",
    "write_couplings_csv",
    "read_couplings_csv",
]

# Gram products of nearly-orthogonal columns leave float-noise couplings
# that would only add work; anything this small is dropped outright.
COUPLING_DROP_TOL = 1e-15

MAX_BRUTEFORCE_QUBITS = 24


@dataclass
class IsingHamiltonian:
    """Two-body Z couplings with the constant offset carried alongside.

    ``couplings`` maps strictly upper-triangular qubit pairs (i, j) to the
    coefficient of Z_i Z_j. The Hamiltonian itself is never materialized
    as a matrix: it is diagonal in the product basis, so evaluating one
    eigenvalue costs one pass over the couplings.
    """

    num_qubits: int
    couplings: dict[tuple[int, int], float] = field(default_factory=dict)
    trace_offset: float = 0.0

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError(f"need at least one qubit, got {self.num_qubits}")
        for (i, j), c in self.couplings.items():
            if not 0 <= i < j < self.num_qubits:
                raise ValueError(
                    f"coupling pair {(i, j)} must satisfy 0 <= i < j < {self.num_qubits}")
            if not np.isfinite(c):
                raise ValueError(f"coupling {(i, j)} is not finite")


class EigenResult(NamedTuple):
    lambda_min: float
    argmin: np.ndarray


def from_quso(p: QusoProblem) -> IsingHamiltonian:
    """Encode w^T q w as couplings 2*q_ij for i < j plus the tr(q) offset."""
    q = p.q
    couplings = {}
    for i in range(p.size):
        for j in range(i + 1, p.size):
            c = 2.0 * q[i, j]
            if abs(c) >= COUPLING_DROP_TOL:
                couplings[(i, j)] = float(c)
    return IsingHamiltonian(num_qubits=p.size, couplings=couplings,
                            trace_offset=p.trace_offset)


def as_bits(y, num_qubits: int | None = None) -> np.ndarray:
    """Validate a bit vector (entries 0/1) and return it as int64."""
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValueError(f"outcome must be one-dimensional, got shape {y.shape}")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("outcome entries must be 0 or 1")
    if num_qubits is not None and y.size != num_qubits:
        raise ValueError(f"outcome has length {y.size}, expected {num_qubits}")
    return y.astype(np.int64)


def assignment_to_outcome(w) -> np.ndarray:
    """Signs to bits, y_i = (w_i + 1) / 2."""
    w = as_signs(w)
    return ((w + 1.0) / 2.0).astype(np.int64)


def outcome_to_assignment(y) -> np.ndarray:
    """Bits to signs, w_i = 2*y_i - 1."""
    return 2.0 * as_bits(y) - 1.0


def outcome_to_index(y) -> int:
    """Pack bits into a basis index, qubit 0 at the most significant bit."""
    index = 0
    for b in as_bits(y):
        index = (index << 1) | int(b)
    return index


def index_to_outcome(index: int, num_qubits: int) -> np.ndarray:
    """Unpack a basis index into its bit vector."""
    if not 0 <= index < (1 << num_qubits):
        raise ValueError(f"index {index} out of range for {num_qubits} qubits")
    return np.array([(index >> (num_qubits - 1 - k)) & 1 for k in range(num_qubits)],
                    dtype=np.int64)


def eigenvalue_of(h: IsingHamiltonian, y) -> float:
    """Eigenvalue of the product-basis state with bits ``y``.

    Z has eigenvalue +1 on bit 0 and -1 on bit 1, so each coupling
    contributes c * z_i * z_j with z = 1 - 2y.
    """
    z = 1.0 - 2.0 * as_bits(y, h.num_qubits)
    total = 0.0
    for (i, j), c in h.couplings.items():
        total += c * z[i] * z[j]
    return float(total)


def _eigenvalue_block(h: IsingHamiltonian, idx: np.ndarray) -> np.ndarray:
    m = h.num_qubits
    z_cache: dict[int, np.ndarray] = {}
    block = np.zeros(idx.size)
    for (i, j), c in h.couplings.items():
        for q in (i, j):
            if q not in z_cache:
                z_cache[q] = 1.0 - 2.0 * ((idx >> (m - 1 - q)) & 1)
        block += c * (z_cache[i] * z_cache[j])
    return block


def eigenvalue_table(h: IsingHamiltonian, chunk: int = 1 << 20) -> np.ndarray:
    """All 2^m product-basis eigenvalues, ordered by basis index."""
    dim = 1 << h.num_qubits
    table = np.zeros(dim)
    for start in range(0, dim, chunk):
        idx = np.arange(start, min(start + chunk, dim), dtype=np.int64)
        table[start:start + idx.size] = _eigenvalue_block(h, idx)
    return table


def min_eigenpair_bruteforce(h: IsingHamiltonian, chunk: int = 1 << 20) -> EigenResult:
    """Exact minimum over all product-basis eigenvalues.

    Serves as the oracle the variational solvers are judged against.
    Ties break to the smallest basis index.
    """
    if h.num_qubits > MAX_BRUTEFORCE_QUBITS:
        raise ValueError(
            f"brute force supports at most {MAX_BRUTEFORCE_QUBITS} qubits, got {h.num_qubits}")
    dim = 1 << h.num_qubits
    best_value = np.inf
    best_index = 0
    for start in range(0, dim, chunk):
        idx = np.arange(start, min(start + chunk, dim), dtype=np.int64)
        block = _eigenvalue_block(h, idx)
        k = int(np.argmin(block))
        if block[k] < best_value:
            best_value = float(block[k])
            best_index = int(idx[k])
    return EigenResult(lambda_min=best_value,
                       argmin=index_to_outcome(best_index, h.num_qubits))


def write_couplings_csv(h: IsingHamiltonian, path) -> None:
    """Write rows ``i,j,coefficient`` plus a final ``offset,<value>`` line."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["i", "j", "coefficient"])
        for (i, j) in sorted(h.couplings):
            writer.writerow([i, j, repr(h.couplings[(i, j)])])
        writer.writerow(["offset", repr(h.trace_offset)])


def read_couplings_csv(path, num_qubits: int | None = None) -> IsingHamiltonian:
    """Read the coupling-list format; infers the qubit count when omitted."""
    couplings: dict[tuple[int, int], float] = {}
    offset = 0.0
    top = -1
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["i", "j", "coefficient"]:
            raise ValueError(f"{path}: expected header i,j,coefficient, got {header}")
        for lineno, fields in enumerate(reader, start=2):
            if not fields:
                continue
            if fields[0] == "offset":
                offset = float(fields[1])
                continue
            if len(fields) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 fields, got {len(fields)}")
            i, j, c = int(fields[0]), int(fields[1]), float(fields[2])
            couplings[(i, j)] = c
            top = max(top, i, j)
    if num_qubits is None:
        num_qubits = top + 1 if top >= 0 else 1
    return IsingHamiltonian(num_qubits=num_qubits, couplings=couplings,
                            trace_offset=offset)
