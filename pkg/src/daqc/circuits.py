"""Circuit data model, serialization, and dense simulation.

A circuit is an ordered list of three element kinds:

* ``GateLayer``    - simultaneous named single-qubit gates;
* ``AnalogBlock``  - the global entangler J(t) over the device graph for a
  dimensionless duration t;
* ``TwoQubitLayer`` - simultaneous ideal two-qubit gates on disjoint pairs
  (the digital baseline: cnot, cphase, fsg).

A noise model, when supplied to :func:`simulate_circuit`, is applied to
every qubit after each entangler event: after each analog block, and after
each two-qubit layer (simultaneous gates count as one event, mirroring the
analog case where one J block is one event).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .qcore import (
    QuantumState,
    apply_1q,
    apply_1q_density,
    apply_2q,
    apply_2q_density,
    apply_kraus_1q,
    check_qubit_count,
    gate_matrix_1q,
    zz_evolution_diagonal,
)
from .topology import CouplingGraph

Number = float | Fraction


@dataclass(frozen=True)
class GateLayer:
    """Single-qubit gates applied in list order: (name, qubit, angle or None)."""

    gates: tuple[tuple[str, int, float | None], ...]


@dataclass(frozen=True)
class AnalogBlock:
    """One application of the always-on entangler for a dimensionless time."""

    duration: Number


@dataclass(frozen=True)
class TwoQubitLayer:
    """Simultaneous ideal two-qubit gates: (kind, q0, q1, params)."""

    gates: tuple[tuple[str, int, int, tuple[float, ...]], ...]

    def __post_init__(self):
        used = [q for g in self.gates for q in (g[1], g[2])]
        if len(set(used)) != len(used):
            raise DomainError("two-qubit layer gates must act on disjoint qubits")


Element = GateLayer | AnalogBlock | TwoQubitLayer


@dataclass
class Circuit:
    n_qubits: int
    elements: list = field(default_factory=list)
    graph: CouplingGraph | None = None

    def add(self, element: Element) -> "Circuit":
        self.elements.append(element)
        return self

    def count_analog_blocks(self) -> int:
        return sum(1 for e in self.elements if isinstance(e, AnalogBlock))

    def count_two_qubit_gates(self, kind: str | None = None) -> int:
        total = 0
        for e in self.elements:
            if isinstance(e, TwoQubitLayer):
                total += sum(1 for g in e.gates if kind is None or g[0] == kind)
        return total

    def extend(self, other: "Circuit") -> "Circuit":
        if other.n_qubits != self.n_qubits:
            raise DomainError("cannot extend with a circuit of different width")
        self.elements.extend(other.elements)
        return self


def cnot_matrix() -> np.ndarray:
    return np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    )


def cphase_matrix(phi: float) -> np.ndarray:
    return np.diag([1.0, 1.0, 1.0, np.exp(1j * phi)]).astype(complex)


def fsg_matrix_raw(phi: float, theta: float) -> np.ndarray:
    s, c = np.sin(phi / 2), np.cos(phi / 2)
    return np.array(
        [
            [1, 0, 0, 0],
            [0, -1j * s, c, 0],
            [0, c, -1j * s, 0],
            [0, 0, 0, np.exp(1j * theta)],
        ],
        dtype=complex,
    )


def _two_qubit_matrix(kind: str, params: tuple[float, ...]) -> np.ndarray:
    if kind == "cnot":
        return cnot_matrix()
    if kind == "cphase":
        return cphase_matrix(*params)
    if kind == "fsg":
        return fsg_matrix_raw(*params)
    raise DomainError(f"unknown two-qubit gate '{kind}'")


# ---------------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------------

def _noise_round(rho: np.ndarray, n: int, noise) -> np.ndarray:
    kraus = noise.kraus_operators()
    for q in range(n):
        rho = apply_kraus_1q(rho, n, q, kraus)
    return rho


def simulate_circuit(
    circuit: Circuit,
    state: QuantumState,
    graph: CouplingGraph | None = None,
    noise=None,
) -> QuantumState:
    """Apply circuit elements in order.

    ``graph`` overrides the circuit's device graph for analog blocks (used to
    execute a schedule compiled for assumed couplings on a perturbed device).
    ``noise`` is any object with ``kraus_operators() -> list[ndarray]``; it
    requires a density-matrix input state.
    """
    n = circuit.n_qubits
    check_qubit_count(n)
    if state.n_qubits != n:
        raise DomainError("state width does not match circuit")
    g = graph if graph is not None else circuit.graph
    if noise is not None and state.kind != "density":
        raise DomainError("noisy simulation requires a density-matrix state")
    density = state.kind == "density"
    data = state.data.copy()

    for element in circuit.elements:
        if isinstance(element, GateLayer):
            for name, q, angle in element.gates:
                mat = gate_matrix_1q(name, angle)
                data = (
                    apply_1q_density(data, n, q, mat)
                    if density
                    else apply_1q(data, n, q, mat)
                )
        elif isinstance(element, AnalogBlock):
            if g is None:
                raise DomainError("analog block requires a device graph")
            diag = zz_evolution_diagonal(g, float(element.duration))
            if density:
                data = data * diag[:, None] * diag.conj()[None, :]
            else:
                data = data * diag
            if noise is not None:
                data = _noise_round(data, n, noise)
        elif isinstance(element, TwoQubitLayer):
            for kind, q0, q1, params in element.gates:
                mat = _two_qubit_matrix(kind, params)
                data = (
                    apply_2q_density(data, n, q0, q1, mat)
                    if density
                    else apply_2q(data, n, q0, q1, mat)
                )
            if noise is not None:
                data = _noise_round(data, n, noise)
        else:
            raise DomainError(f"unknown circuit element {element!r}")

    return QuantumState(state.kind, n, data)


def circuit_unitary(circuit: Circuit, graph: CouplingGraph | None = None) -> np.ndarray:
    """Dense unitary of the circuit (columns evolved in one batch)."""
    n = circuit.n_qubits
    check_qubit_count(n)
    g = graph if graph is not None else circuit.graph
    dim = 2 ** n
    data = np.eye(dim, dtype=complex)
    for element in circuit.elements:
        if isinstance(element, GateLayer):
            for name, q, angle in element.gates:
                data = apply_1q(data, n, q, gate_matrix_1q(name, angle))
        elif isinstance(element, AnalogBlock):
            if g is None:
                raise DomainError("analog block requires a device graph")
            diag = zz_evolution_diagonal(g, float(element.duration))
            data = data * diag[:, None]
        elif isinstance(element, TwoQubitLayer):
            for kind, q0, q1, params in element.gates:
                data = apply_2q(data, n, q0, q1, _two_qubit_matrix(kind, params))
        else:
            raise DomainError(f"unknown circuit element {element!r}")
    return data


# ---------------------------------------------------------------------------
# Serialization (line-oriented, round-trippable)
# ---------------------------------------------------------------------------

def format_number(value: Number) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)
    return repr(float(value))


def parse_number(token: str) -> Number:
    if "/" in token:
        return Fraction(token)
    if "." in token or "e" in token or "E" in token:
        return float(token)
    return Fraction(int(token))


def serialize_graph(graph: CouplingGraph) -> str:
    parts = [f"{p}-{q}:{format_number(alpha)}" for (p, q), alpha in sorted(graph.couplings.items())]
    return f"graph {graph.n_qubits} " + " ".join(parts)


def parse_graph_line(line: str) -> CouplingGraph:
    tokens = line.split()
    if tokens[0] != "graph":
        raise DomainError("graph line must start with 'graph'")
    n = int(tokens[1])
    couplings = {}
    for token in tokens[2:]:
        edge, _, alpha = token.partition(":")
        p, q = edge.split("-")
        couplings[(int(p), int(q))] = parse_number(alpha)
    return CouplingGraph(n, couplings)


def serialize_circuit(circuit: Circuit) -> str:
    lines = [f"nqubits {circuit.n_qubits}"]
    if circuit.graph is not None:
        lines.append(serialize_graph(circuit.graph))
    for element in circuit.elements:
        if isinstance(element, GateLayer):
            parts = []
            for name, q, angle in element.gates:
                parts.append(f"{name} {q}" + (f" {repr(float(angle))}" if angle is not None else ""))
            lines.append("sq " + " ; ".join(parts))
        elif isinstance(element, AnalogBlock):
            lines.append(f"analog {format_number(element.duration)}")
        elif isinstance(element, TwoQubitLayer):
            parts = []
            for kind, q0, q1, params in element.gates:
                angle_str = "".join(f" {repr(float(p))}" for p in params)
                parts.append(f"{kind} {q0} {q1}{angle_str}")
            lines.append("twoq " + " ; ".join(parts))
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> Circuit:
    n_qubits = None
    graph = None
    elements: list = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "nqubits":
            n_qubits = int(rest)
        elif head == "graph":
            graph = parse_graph_line(line)
        elif head == "sq":
            gates = []
            for part in rest.split(";"):
                tokens = part.split()
                name, q = tokens[0], int(tokens[1])
                angle = float(tokens[2]) if len(tokens) > 2 else None
                gates.append((name, q, angle))
            elements.append(GateLayer(tuple(gates)))
        elif head == "analog":
            elements.append(AnalogBlock(parse_number(rest.strip())))
        elif head == "twoq":
            gates = []
            for part in rest.split(";"):
                tokens = part.split()
                kind, q0, q1 = tokens[0], int(tokens[1]), int(tokens[2])
                params = tuple(float(t) for t in tokens[3:])
                gates.append((kind, q0, q1, params))
            elements.append(TwoQubitLayer(tuple(gates)))
        else:
            raise DomainError(f"unrecognized circuit line: {raw!r}")
    if n_qubits is None:
        raise DomainError("circuit text is missing the 'nqubits' header")
    return Circuit(n_qubits, elements, graph)
