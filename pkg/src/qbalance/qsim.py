"""Dense statevector simulation for small qubit registers.

Amplitudes are indexed with qubit 0 at the most significant bit, so bit
k of a basis index is the measured value of qubit k, matching the
outcome convention in `ising`. Gates act on reshaped views of the
amplitude array with stride arithmetic; no gate ever materializes a
2^m x 2^m matrix, which keeps a 12-qubit circuit in the millisecond
range.

Rotation conventions (half-angle, minus sign in the exponent):

    RX(t) = exp(-i*t/2*X), RY(t) = exp(-i*t/2*Y), RZ(t) = exp(-i*t/2*Z),
    ZZPhase(t) = exp(-i*t/2*Z(x)Z).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .ising import IsingHamiltonian, eigenvalue_table

__all__ = [
    "Gate",
    "Circuit",
    "gate_unitary",
    "zero_state",
    "basis_state",
    "uniform_state",
    "apply",
    "expectation_diagonal",
    "sample_shots",
]

_SQRT2_INV = 1.0 / np.sqrt(2.0)
_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) * _SQRT2_INV
_CX = np.array([[1, 0, 0, 0],
                [0, 1, 0, 0],
                [0, 0, 0, 1],
                [0, 0, 1, 0]], dtype=complex)


class Gate(NamedTuple):
    name: str
    qubits: tuple[int, ...]
    angle: float | None = None


@dataclass
class Circuit:
    """An ordered gate list over a fixed register size.

    The builder methods validate indices on append and return ``self``
    so construction chains.
    """

    num_qubits: int
    gates: list[Gate] = field(default_factory=list)

    def _check(self, *qubits: int) -> None:
        for q in qubits:
            if not 0 <= q < self.num_qubits:
                raise ValueError(f"qubit index {q} out of range for {self.num_qubits} qubits")

    def h(self, q: int) -> "Circuit":
        self._check(q)
        self.gates.append(Gate("h", (q,)))
        return self

    def rx(self, q: int, angle: float) -> "Circuit":
        self._check(q)
        self.gates.append(Gate("rx", (q,), float(angle)))
        return self

    def ry(self, q: int, angle: float) -> "Circuit":
        self._check(q)
        self.gates.append(Gate("ry", (q,), float(angle)))
        return self

    def rz(self, q: int, angle: float) -> "Circuit":
        self._check(q)
        self.gates.append(Gate("rz", (q,), float(angle)))
        return self

    def cx(self, control: int, target: int) -> "Circuit":
        self._check(control, target)
        if control == target:
            raise ValueError("control and target must differ")
        self.gates.append(Gate("cx", (control, target)))
        return self

    def zzphase(self, q1: int, q2: int, angle: float) -> "Circuit":
        self._check(q1, q2)
        if q1 == q2:
            raise ValueError("zzphase acts on two distinct qubits")
        self.gates.append(Gate("zzphase", (q1, q2), float(angle)))
        return self


def _rx_matrix(t: float) -> np.ndarray:
    c, s = np.cos(t / 2.0), np.sin(t / 2.0)
    return np.array([[c, -1j * s], [-1j * s, c]])


def _ry_matrix(t: float) -> np.ndarray:
    c, s = np.cos(t / 2.0), np.sin(t / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz_matrix(t: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * t), 0.0], [0.0, np.exp(0.5j * t)]])


def gate_unitary(gate: Gate) -> np.ndarray:
    """The 2x2 or 4x4 unitary block of a single gate."""
    if gate.name == "h":
        return _HADAMARD.copy()
    if gate.name == "rx":
        return _rx_matrix(gate.angle)
    if gate.name == "ry":
        return _ry_matrix(gate.angle)
    if gate.name == "rz":
        return _rz_matrix(gate.angle)
    if gate.name == "cx":
        return _CX.copy()
    if gate.name == "zzphase":
        zz = np.array([1.0, -1.0, -1.0, 1.0])
        return np.diag(np.exp(-0.5j * gate.angle * zz))
    raise ValueError(f"unknown gate {gate.name!r}")


def zero_state(num_qubits: int) -> np.ndarray:
    psi = np.zeros(1 << num_qubits, dtype=complex)
    psi[0] = 1.0
    return psi


def basis_state(num_qubits: int, index: int) -> np.ndarray:
    if not 0 <= index < (1 << num_qubits):
        raise ValueError(f"index {index} out of range for {num_qubits} qubits")
    psi = np.zeros(1 << num_qubits, dtype=complex)
    psi[index] = 1.0
    return psi


def uniform_state(num_qubits: int) -> np.ndarray:
    dim = 1 << num_qubits
    return np.full(dim, 1.0 / np.sqrt(dim), dtype=complex)


def _apply_single(psi: np.ndarray, u: np.ndarray, q: int) -> None:
    # view with qubit q as the middle axis: leading 2^q, trailing the rest
    view = psi.reshape((1 << q, 2, -1))
    s0, s1 = view[:, 0, :], view[:, 1, :]
    n0 = u[0, 0] * s0 + u[0, 1] * s1
    n1 = u[1, 0] * s0 + u[1, 1] * s1
    view[:, 0, :] = n0
    view[:, 1, :] = n1


def _apply_cx(psi: np.ndarray, control: int, target: int, m: int) -> None:
    view = psi.reshape([2] * m)
    sel10 = [slice(None)] * m
    sel10[control], sel10[target] = 1, 0
    sel11 = [slice(None)] * m
    sel11[control], sel11[target] = 1, 1
    tmp = view[tuple(sel10)].copy()
    view[tuple(sel10)] = view[tuple(sel11)]
    view[tuple(sel11)] = tmp


class _ZZProducts:
    """Per-call cache of z_i * z_j sign vectors over all basis indices."""

    def __init__(self, m: int):
        self.m = m
        self._z: dict[int, np.ndarray] = {}
        self._zz: dict[tuple[int, int], np.ndarray] = {}

    def _z_of(self, q: int) -> np.ndarray:
        if q not in self._z:
            idx = np.arange(1 << self.m, dtype=np.int64)
            self._z[q] = 1.0 - 2.0 * ((idx >> (self.m - 1 - q)) & 1)
        return self._z[q]

    def pair(self, q1: int, q2: int) -> np.ndarray:
        key = (q1, q2) if q1 < q2 else (q2, q1)
        if key not in self._zz:
            self._zz[key] = self._z_of(key[0]) * self._z_of(key[1])
        return self._zz[key]


def apply(circuit: Circuit, state: np.ndarray) -> np.ndarray:
    """Run the gate list over a copy of ``state`` and return the result.

    Consecutive zzphase gates commute and are diagonal, so the applicator
    accumulates their phases into one elementwise multiply; the gate list
    itself is untouched.
    """
    m = circuit.num_qubits
    psi = np.array(state, dtype=complex)
    if psi.shape != (1 << m,):
        raise ValueError(f"state has shape {psi.shape}, circuit needs ({1 << m},)")
    for gate in circuit.gates:
        for q in gate.qubits:
            if not 0 <= q < m:
                raise ValueError(f"qubit index {q} out of range for {m} qubits")
    zz = _ZZProducts(m)
    gates = circuit.gates
    i = 0
    while i < len(gates):
        gate = gates[i]
        if gate.name == "zzphase":
            exponent = np.zeros(psi.size)
            while i < len(gates) and gates[i].name == "zzphase":
                g = gates[i]
                exponent += (-0.5 * g.angle) * zz.pair(g.qubits[0], g.qubits[1])
                i += 1
            psi *= np.exp(1j * exponent)
            continue
        if gate.name == "cx":
            _apply_cx(psi, gate.qubits[0], gate.qubits[1], m)
        else:
            _apply_single(psi, gate_unitary(gate), gate.qubits[0])
        i += 1
    return psi


def expectation_diagonal(state: np.ndarray, h: IsingHamiltonian) -> float:
    """<psi|H|psi> for a diagonal Hamiltonian, as sum_y |psi_y|^2 lambda_y."""
    state = np.asarray(state)
    dim = 1 << h.num_qubits
    if state.shape != (dim,):
        raise ValueError(f"state has shape {state.shape}, Hamiltonian needs ({dim},)")
    probs = np.abs(state) ** 2
    return float(probs @ eigenvalue_table(h))


def sample_shots(state: np.ndarray, shots: int, rng: np.random.Generator) -> dict[int, int]:
    """Multinomial outcome counts keyed by basis index.

    Sampling is inverse-CDF over the cumulative probabilities, so a
    seeded generator reproduces the histogram exactly. Keys are sorted
    ascending and the counts sum to ``shots``.
    """
    if shots < 1:
        raise ValueError(f"shots must be at least 1, got {shots}")
    probs = np.abs(np.asarray(state)) ** 2
    cdf = np.cumsum(probs / probs.sum())
    cdf[-1] = 1.0
    draws = rng.random(shots)
    indices = np.searchsorted(cdf, draws, side="right")
    values, counts = np.unique(indices, return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}
