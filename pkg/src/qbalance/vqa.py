"""Variational ansatz builders and the classical optimization loop.

Two circuit families are provided:

* a two-local ansatz of per-qubit rz/ry rotation layers interleaved with
  a circular CX entangling ring, acting on |0...0>;
* the alternating cost/mixer construction with p layers acting on the
  uniform superposition, whose cost layer realizes exp(-i*gamma*c*Z_iZ_j)
  per coupling c and whose mixer is exp(-i*beta*X) on every qubit.

A seeded, restarted Nelder-Mead search drives the parameters toward the
lowest expectation value of the diagonal Hamiltonian; the final state is
then sampled and every sampled outcome is scored with the exact
imbalance objective, so the reported assignment is the best coloring
actually observed rather than the modal bitstring.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import core
from .core import AugmentedDesign, CovariateSet
from .ising import (IsingHamiltonian, eigenvalue_table, from_quso,
                    index_to_outcome, outcome_to_assignment)
from .optimize import nelder_mead
from .qsim import Circuit, apply, sample_shots, zero_state

__all__ = [
    "TwoLocalConfig",
    "QaoaConfig",
    "OptimizerConfig",
    "MinimizeResult",
    "RunResult",
    "build_two_local",
    "build_qaoa",
    "vqe_initial_point",
    "qaoa_initial_point",
    "minimize_expectation",
    "run_vqe",
    "run_qaoa",
]

DEFAULT_SHOTS = 65536


@dataclass
class TwoLocalConfig:
    """Layout of the layered rotation ansatz: rz/ry blocks, circular CX ring."""

    num_qubits: int
    reps: int = 3

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("need at least one qubit")
        if self.reps < 1:
            raise ValueError("need at least one repetition")

    @property
    def parameter_count(self) -> int:
        return (self.reps + 1) * 2 * self.num_qubits


@dataclass
class QaoaConfig:
    """Layer count p of the alternating cost/mixer circuit; 2p parameters."""

    num_qubits: int
    p: int = 8

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("need at least one qubit")
        if self.p < 1:
            raise ValueError("need at least one layer")

    @property
    def parameter_count(self) -> int:
        return 2 * self.p


@dataclass
class OptimizerConfig:
    restarts: int = 3
    max_evals: int = 2000
    ftol: float = 1e-8
    initial_step: float = 0.25

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("need at least one restart")
        if self.max_evals < 1:
            raise ValueError("evaluation budget must be positive")


@dataclass
class MinimizeResult:
    theta: np.ndarray
    expectation: float
    evaluations: int
    best_trace: np.ndarray


@dataclass
class RunResult:
    """Outcome of one assignment run, shared by every method.

    ``best_objective`` is the imbalance of ``best_assignment`` evaluated
    through `core`; the variational fields (expectation, histogram,
    evaluations, ansatz) stay None or 0 for the classical methods.
    """

    method: str
    best_assignment: np.ndarray
    best_objective: float
    expectation: float | None
    evaluations: int
    histogram: dict[int, int] | None
    seed: int
    phi: float
    shots: int | None
    ansatz: dict | None = None

    def to_json_dict(self) -> dict:
        return {
            "method": self.method,
            "omega": [int(v) for v in self.best_assignment],
            "imbalance": float(self.best_objective),
            "expectation": None if self.expectation is None else float(self.expectation),
            "evaluations": int(self.evaluations),
            "seed": int(self.seed),
            "phi": float(self.phi),
            "shots": None if self.shots is None else int(self.shots),
            "ansatz": self.ansatz,
        }


def build_two_local(cfg: TwoLocalConfig, theta) -> Circuit:
    """Assemble the layered rotation circuit for one parameter vector.

    Each of the ``reps`` layers consumes 2m angles (all rz first, then
    all ry, in qubit order) and closes with the ring CX(0,1), CX(1,2),
    ..., CX(m-1,0); one final rotation layer follows the last ring. With
    every angle zero the circuit fixes |0...0>.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (cfg.parameter_count,):
        raise ValueError(
            f"expected {cfg.parameter_count} parameters, got shape {theta.shape}")
    m = cfg.num_qubits
    circuit = Circuit(m)
    k = 0
    for layer in range(cfg.reps + 1):
        for q in range(m):
            circuit.rz(q, theta[k])
            k += 1
        for q in range(m):
            circuit.ry(q, theta[k])
            k += 1
        if layer < cfg.reps and m > 1:
            for q in range(m):
                circuit.cx(q, (q + 1) % m)
    return circuit


def build_qaoa(cfg: QaoaConfig, h: IsingHamiltonian, theta) -> Circuit:
    """Assemble the p-layer cost/mixer circuit for parameters (gammas, betas).

    Hadamards prepare the uniform superposition; layer k then applies
    ZZPhase(i, j, 2*c*gamma_k) for every coupling c, realizing
    exp(-i*gamma_k*c*Z_iZ_j), followed by RX(q, 2*beta_k) on every qubit.
    """
    if h.num_qubits != cfg.num_qubits:
        raise ValueError(
            f"Hamiltonian acts on {h.num_qubits} qubits, config expects {cfg.num_qubits}")
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (cfg.parameter_count,):
        raise ValueError(
            f"expected {cfg.parameter_count} parameters, got shape {theta.shape}")
    gammas, betas = theta[:cfg.p], theta[cfg.p:]
    m = cfg.num_qubits
    circuit = Circuit(m)
    for q in range(m):
        circuit.h(q)
    pairs = sorted(h.couplings)
    for k in range(cfg.p):
        for (i, j) in pairs:
            circuit.zzphase(i, j, 2.0 * h.couplings[(i, j)] * gammas[k])
        for q in range(m):
            circuit.rx(q, 2.0 * betas[k])
    return circuit


def vqe_initial_point(cfg: TwoLocalConfig, rng: np.random.Generator) -> np.ndarray:
    """Angles drawn uniformly from [-pi, pi]."""
    return rng.uniform(-np.pi, np.pi, cfg.parameter_count)


def qaoa_initial_point(cfg: QaoaConfig, rng: np.random.Generator) -> np.ndarray:
    """Gammas from [0, pi/2], betas from [0, pi/4]."""
    return np.concatenate([rng.uniform(0.0, np.pi / 2.0, cfg.p),
                           rng.uniform(0.0, np.pi / 4.0, cfg.p)])


def minimize_expectation(builder: Callable[[np.ndarray], Circuit],
                         h: IsingHamiltonian,
                         initial_point: Callable[[np.random.Generator], np.ndarray],
                         rng: np.random.Generator,
                         mode: str = "exact",
                         shots: int | None = None,
                         optimizer: OptimizerConfig | None = None) -> MinimizeResult:
    """Search circuit parameters for the lowest diagonal expectation.

    ``builder`` maps a parameter vector to a circuit acting on |0...0>,
    and ``initial_point`` draws a fresh start per restart from the shared
    generator. In "shots" mode each objective call estimates the
    expectation from sampled outcomes instead of the exact amplitudes.
    The best restart wins; ``best_trace`` records the best value seen
    after every objective call across all restarts.
    """
    cfg = optimizer or OptimizerConfig()
    if mode not in ("exact", "shots"):
        raise ValueError(f"mode must be 'exact' or 'shots', got {mode!r}")
    if mode == "shots" and (shots is None or shots < 1):
        raise ValueError("shots mode needs a positive shot count")
    table = eigenvalue_table(h)
    start = zero_state(h.num_qubits)

    def objective(theta: np.ndarray) -> float:
        psi = apply(builder(theta), start)
        if mode == "exact":
            return float((np.abs(psi) ** 2) @ table)
        histogram = sample_shots(psi, shots, rng)
        return sum(count * table[i] for i, count in histogram.items()) / shots

    best = None
    total_evaluations = 0
    trace: list[float] = []
    for _ in range(cfg.restarts):
        theta0 = initial_point(rng)
        result = nelder_mead(objective, theta0, max_evals=cfg.max_evals,
                             initial_step=cfg.initial_step, ftol=cfg.ftol)
        total_evaluations += result.evaluations
        for value in result.best_trace:
            running = trace[-1] if trace else np.inf
            trace.append(min(running, float(value)))
        if best is None or result.fun < best.fun:
            best = result
    return MinimizeResult(theta=best.x, expectation=best.fun,
                          evaluations=total_evaluations,
                          best_trace=np.asarray(trace))


def best_sampled_assignment(design: AugmentedDesign,
                            histogram: dict[int, int]) -> tuple[np.ndarray, float]:
    """Pick the sampled outcome with the lowest imbalance.

    Outcomes are scored through `core`, not through the Hamiltonian, so
    no stale value can leak into the result. When an outcome ties with
    its global sign flip, the one whose first entry is +1 wins; other
    ties keep the smaller basis index.
    """
    m = design.m
    best_w = None
    best_value = np.inf
    for index in sorted(histogram):
        w = outcome_to_assignment(index_to_outcome(index, m))
        value = core.assignment_imbalance(design, w)
        if value < best_value:
            best_value = value
            best_w = w
        elif (value == best_value and best_w is not None and best_w[0] < 0
              and w[0] > 0 and np.array_equal(w, -best_w)):
            best_w = w
    return best_w, float(best_value)


def _run_variational(method: str, x: CovariateSet, phi: float, builder,
                     initial_point, ansatz: dict, shots: int, seed: int,
                     optimizer: OptimizerConfig | None,
                     shots_during_opt: bool) -> RunResult:
    design = core.build_augmented(x, phi)
    h = from_quso(core.augmented_gram(design))
    rng = np.random.default_rng(seed)
    minimum = minimize_expectation(
        builder, h, initial_point, rng,
        mode="shots" if shots_during_opt else "exact",
        shots=shots if shots_during_opt else None,
        optimizer=optimizer)
    psi = apply(builder(minimum.theta), zero_state(h.num_qubits))
    histogram = sample_shots(psi, shots, rng)
    w, value = best_sampled_assignment(design, histogram)
    return RunResult(method=method, best_assignment=w, best_objective=value,
                     expectation=minimum.expectation,
                     evaluations=minimum.evaluations, histogram=histogram,
                     seed=seed, phi=phi, shots=shots, ansatz=ansatz)


def run_vqe(x: CovariateSet, phi: float, reps: int = 3,
            shots: int = DEFAULT_SHOTS, seed: int = 0,
            optimizer: OptimizerConfig | None = None,
            shots_during_opt: bool = False) -> RunResult:
    """Optimize the two-local ansatz on the imbalance Hamiltonian and sample."""
    cfg = TwoLocalConfig(num_qubits=x.m, reps=reps)
    return _run_variational(
        "vqe", x, phi,
        builder=lambda theta: build_two_local(cfg, theta),
        initial_point=lambda rng: vqe_initial_point(cfg, rng),
        ansatz={"kind": "two_local", "reps": reps,
                "parameters": cfg.parameter_count},
        shots=shots, seed=seed, optimizer=optimizer,
        shots_during_opt=shots_during_opt)


def run_qaoa(x: CovariateSet, phi: float, p: int = 8,
             shots: int = DEFAULT_SHOTS, seed: int = 0,
             optimizer: OptimizerConfig | None = None,
             shots_during_opt: bool = False) -> RunResult:
    """Optimize the p-layer cost/mixer circuit on the imbalance Hamiltonian."""
    cfg = QaoaConfig(num_qubits=x.m, p=p)
    design = core.build_augmented(x, phi)
    h = from_quso(core.augmented_gram(design))
    return _run_variational(
        "qaoa", x, phi,
        builder=lambda theta: build_qaoa(cfg, h, theta),
        initial_point=lambda rng: qaoa_initial_point(cfg, rng),
        ansatz={"kind": "qaoa", "p": p, "parameters": cfg.parameter_count},
        shots=shots, seed=seed, optimizer=optimizer,
        shots_during_opt=shots_during_opt)
