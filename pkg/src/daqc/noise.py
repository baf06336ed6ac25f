"""Error models: coupling misdetermination and per-qubit Kraus channels.

The channels act on the density matrix of each qubit after every entangler
event.  One event is one analog block in the digital-analog case and one
layer of simultaneous CNOTs in the digital case: a chain refocusing stage
spends two analog blocks per CNOT layer, which is exactly why the
digital-analog infidelity slope comes out twice the digital one.

Sweeps derive one child seed per initial state from the root seed, so grid
points and samples can be evaluated in any order (or in parallel) without
changing the output.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .circuits import Circuit, simulate_circuit
from .errors import DomainError, ResourceLimitError
from .fermion import random_hamiltonian
from .network import synthesize_cnot, trotter_step_spinless
from .qcore import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    QuantumState,
    apply_kraus_1q,
    haar_random_state,
    process_fidelity,
    pure_fidelity,
)
from .topology import CouplingGraph, chain

CHANNEL_KINDS = ("depolarizing", "amplitude", "phase")


def _check_probability(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value}")


def kraus_operators(kind: str, parameter: float) -> list[np.ndarray]:
    """Kraus operators of the three single-qubit channels."""
    _check_probability(kind, parameter)
    if kind == "depolarizing":
        p = parameter
        return [
            np.sqrt(1 - p) * np.eye(2, dtype=complex),
            np.sqrt(p / 3) * PAULI_X,
            np.sqrt(p / 3) * PAULI_Y,
            np.sqrt(p / 3) * PAULI_Z,
        ]
    if kind == "amplitude":
        g = parameter
        e0 = np.array([[1, 0], [0, np.sqrt(1 - g)]], dtype=complex)
        e1 = np.array([[0, np.sqrt(g)], [0, 0]], dtype=complex)
        return [e0, e1]
    if kind == "phase":
        lam = parameter
        e0 = np.array([[1, 0], [0, np.sqrt(1 - lam)]], dtype=complex)
        e1 = np.array([[0, 0], [0, np.sqrt(lam)]], dtype=complex)
        return [e0, e1]
    raise DomainError(f"unknown channel kind '{kind}'")


@dataclass(frozen=True)
class NoiseModel:
    """A per-qubit channel applied after every entangler event."""

    kind: str
    parameter: float

    def __post_init__(self):
        if self.kind not in CHANNEL_KINDS:
            raise DomainError(f"unknown channel kind '{self.kind}'")
        _check_probability(self.kind, self.parameter)

    def kraus_operators(self) -> list[np.ndarray]:
        return kraus_operators(self.kind, self.parameter)


def _apply_channel(rho, qubit: int, kind: str, parameter: float):
    wrapped = isinstance(rho, QuantumState)
    mat = rho.as_density() if wrapped else np.asarray(rho, dtype=complex)
    n = int(np.log2(mat.shape[0]))
    out = apply_kraus_1q(mat, n, qubit, kraus_operators(kind, parameter))
    return QuantumState.density_matrix(out) if wrapped else out


def apply_depolarizing(rho, qubit: int, p: float):
    """(1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z) on one qubit."""
    return _apply_channel(rho, qubit, "depolarizing", p)


def apply_amplitude_damping(rho, qubit: int, gamma: float):
    """Energy dissipation toward |0> with strength gamma."""
    return _apply_channel(rho, qubit, "amplitude", gamma)


def apply_phase_damping(rho, qubit: int, lam: float):
    """Coherence loss without energy loss: off-diagonals scale by sqrt(1-lam)."""
    return _apply_channel(rho, qubit, "phase", lam)


# ---------------------------------------------------------------------------
# Coupling misdetermination
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CouplingPerturbation:
    deviations: dict
    bound: float


def perturb_couplings(
    graph: CouplingGraph, omega: float, seed
) -> tuple[CouplingGraph, CouplingPerturbation]:
    """Add an i.i.d. uniform deviation from [-omega, omega] to every coupling.

    Negative ``omega`` mirrors the draw (deviations are negated), which makes
    the evenness of infidelity in omega directly testable.
    """
    bound = abs(omega)
    min_alpha = min((float(a) for a in graph.couplings.values()), default=0.0)
    if graph.couplings and bound >= min_alpha:
        raise DomainError("omega must stay below the smallest coupling")
    rng = np.random.default_rng(seed)
    deviations = {}
    new = {}
    for edge in graph.edges:
        dev = float(omega) * rng.uniform(-1.0, 1.0)
        deviations[edge] = dev
        new[edge] = float(graph.couplings[edge]) + dev
    return graph.with_couplings(new), CouplingPerturbation(deviations, bound)


def cnot_infidelity_curve(ratios) -> list[tuple[float, float]]:
    """Process fidelity of CNOT executed with coupling 1 + r instead of 1.

    Simulates the synthesized fragment on the miscalibrated device; the
    result follows cos^2((pi/4) r) exactly.
    """
    from .circuits import circuit_unitary

    fragment = synthesize_cnot()
    ideal = circuit_unitary(fragment)
    out = []
    for r in ratios:
        actual_graph = CouplingGraph(2, {(0, 1): 1.0 + float(r)})
        actual = circuit_unitary(fragment, graph=actual_graph)
        out.append((float(r), process_fidelity(actual, ideal)))
    return out


# ---------------------------------------------------------------------------
# Trotter-step fidelity sweeps
# ---------------------------------------------------------------------------

@dataclass
class SweepConfig:
    n_qubits: int
    variable: str  # "omega" | "depolarizing" | "amplitude" | "phase"
    grid: list[float]
    backend: str = "da"
    n_states: int = 100
    seed: int = 0
    dt: float = 1.0
    bound: float = 0.1

    def __post_init__(self):
        if self.variable not in ("omega",) + CHANNEL_KINDS:
            raise DomainError(f"unknown sweep variable '{self.variable}'")
        if self.variable == "omega" and self.backend != "da":
            raise DomainError("the coupling-deviation sweep needs the digital-analog backend")
        if self.backend not in ("da", "digital"):
            raise DomainError(f"unknown backend '{self.backend}'")
        if self.n_states < 1:
            raise DomainError("n_states must be positive")
        limit = 12 if self.variable == "omega" else 8
        if self.n_qubits > limit:
            raise ResourceLimitError(
                f"{self.variable} sweeps are limited to {limit} qubits"
            )


@dataclass
class SweepRow:
    parameter: float
    mean_fidelity: float
    stderr: float


@dataclass
class SweepResult:
    config: SweepConfig
    rows: list[SweepRow] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("param,mean_fidelity,stderr,n_states,seed\n")
        for row in self.rows:
            buf.write(
                f"{row.parameter!r},{row.mean_fidelity!r},{row.stderr!r},"
                f"{self.config.n_states},{self.config.seed}\n"
            )
        return buf.getvalue()


def _haar_seeds(config: SweepConfig) -> list:
    return [[config.seed, 7, k] for k in range(config.n_states)]


def _sweep_circuit(config: SweepConfig) -> tuple[Circuit, CouplingGraph]:
    graph = chain(config.n_qubits)
    h = random_hamiltonian(config.n_qubits, config.bound / config.dt, seed=[config.seed, 3])
    circuit, _ = trotter_step_spinless(
        h, config.dt, backend=config.backend, graph=graph if config.backend == "da" else None
    )
    return circuit, graph


def trotter_fidelity_sweep(config: SweepConfig) -> SweepResult:
    """Mean state fidelity of one noisy/perturbed Trotter step vs the ideal one.

    Haar-random initial states are drawn from per-sample child seeds and
    reused across grid points; the coupling-deviation sweep uses one disorder
    realization per run, scaled by each grid value.
    """
    circuit, graph = _sweep_circuit(config)
    states = [haar_random_state(config.n_qubits, seed) for seed in _haar_seeds(config)]
    ideal_out = [simulate_circuit(circuit, s).data for s in states]
    result = SweepResult(config)

    if config.variable == "omega":
        rng = np.random.default_rng([config.seed, 11])
        unit_dev = {edge: rng.uniform(-1.0, 1.0) for edge in graph.edges}
        for value in config.grid:
            if value == 0.0:
                perturbed = graph
            else:
                perturbed = graph.with_couplings(
                    {e: float(graph.couplings[e]) + value * u for e, u in unit_dev.items()}
                )
            fids = []
            for s, ideal_vec in zip(states, ideal_out):
                noisy_vec = simulate_circuit(circuit, s, graph=perturbed).data
                fids.append(pure_fidelity(ideal_vec, noisy_vec))
            result.rows.append(_row(value, fids))
        return result

    for value in config.grid:
        noise = NoiseModel(config.variable, value) if value != 0.0 else None
        fids = []
        for s, ideal_vec in zip(states, ideal_out):
            if noise is None:
                fids.append(1.0)
                continue
            rho0 = QuantumState.density_matrix(np.outer(s.data, s.data.conj()))
            rho = simulate_circuit(circuit, rho0, noise=noise)
            fids.append(float(np.real(ideal_vec.conj() @ rho.data @ ideal_vec)))
        result.rows.append(_row(value, fids))
    return result


def _row(value: float, fidelities: list[float]) -> SweepRow:
    arr = np.asarray(fidelities)
    stderr = float(arr.std(ddof=1) / np.sqrt(arr.size)) if arr.size > 1 else 0.0
    return SweepRow(float(value), float(arr.mean()), stderr)
