"""Refocusing-schedule compilation and exact verification.

A schedule is an ordered list of segments ``(t_i, parity layer)``: the
always-on entangler acts for ``t_i`` while each qubit sits in either the
even- or odd-parity state (odd parity reverses the sign of that qubit's ZZ
accumulation, since X exp(-i Z Z t) X = exp(+i Z Z t)).  Qubits assigned to
different Hadamard columns decouple exactly because distinct columns are
orthogonal; qubits of one interaction pair share a column and accumulate the
full ZZ angle.

Coupling spreads are handled by the global refocusing operation: with
T = max over pairs of theta_pq / alpha_pq, each pair has an excess time
tau_pq = T - theta_pq / alpha_pq during which it must be *destroyed* (its
qubits separated onto different columns).  Cutting the timeline at the
distinct tau values and recoloring each window gives every pair an active
time of exactly theta_pq / alpha_pq and every non-pair edge zero net angle.
All arithmetic stays in exact rationals whenever couplings and targets are
rational.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .circuits import AnalogBlock, Circuit, GateLayer, circuit_unitary, format_number, parse_number
from .errors import DomainError
from .qcore import phase_aligned_distance
from .topology import (
    CouplingGraph,
    EntityPartition,
    assign_sequences,
    grid_dims,
    hadamard_matrix,
)

Number = float | Fraction


@dataclass(frozen=True)
class Segment:
    duration: Number
    parities: tuple[int, ...]  # 1 = odd parity during this interval

    def __post_init__(self):
        if self.duration < 0:
            raise DomainError("segment duration must be nonnegative")
        if any(p not in (0, 1) for p in self.parities):
            raise DomainError("parities must be bits")


@dataclass
class RefocusSchedule:
    n_qubits: int
    segments: list[Segment] = field(default_factory=list)

    @property
    def total_duration(self) -> Number:
        return sum((s.duration for s in self.segments), Fraction(0))

    def is_exact(self) -> bool:
        return all(isinstance(s.duration, Fraction) for s in self.segments)

    def to_text(self) -> str:
        lines = []
        for seg in self.segments:
            bits = "".join(str(b) for b in seg.parities)
            lines.append(f"t_i {format_number(seg.duration)} parities {bits}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RefocusSchedule":
        segments = []
        n_qubits = None
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            if len(tokens) != 4 or tokens[0] != "t_i" or tokens[2] != "parities":
                raise DomainError(f"malformed schedule line: {raw!r}")
            duration = parse_number(tokens[1])
            parities = tuple(int(c) for c in tokens[3])
            if n_qubits is None:
                n_qubits = len(parities)
            elif n_qubits != len(parities):
                raise DomainError("inconsistent qubit count across schedule lines")
            segments.append(Segment(duration, parities))
        if n_qubits is None:
            raise DomainError("schedule text contains no segments")
        return cls(n_qubits, segments)


@dataclass(frozen=True)
class CompileTarget:
    """Per-pair accumulated ZZ angles; zero on every other edge."""

    partition: EntityPartition
    angles: dict

    @classmethod
    def uniform(cls, partition: EntityPartition, angle: Number) -> "CompileTarget":
        return cls(partition, {pair: angle for pair in partition.pairs})

    def angle_of(self, pair: tuple[int, int]) -> Number:
        return self.angles[pair]


# ---------------------------------------------------------------------------
# Compilation
# ---------------------------------------------------------------------------

def _window_segments(
    graph: CouplingGraph,
    partition: EntityPartition,
    duration: Number,
    min_order: int | None,
) -> list[Segment]:
    """One individual refocusing operation: equal sub-intervals from H(m)."""
    assignment = assign_sequences(graph, partition, min_order)
    m = assignment.order
    h = hadamard_matrix(m)
    cols = assignment.qubit_columns(graph.n_qubits)
    t_i = duration / m
    segments = []
    for i in range(m):
        parities = tuple(0 if h[i, cols[q]] == 1 else 1 for q in range(graph.n_qubits))
        segments.append(Segment(t_i, parities))
    return segments


def compile_uniform(
    graph: CouplingGraph,
    partition: EntityPartition,
    total_time: Number,
    min_order: int | None = None,
) -> RefocusSchedule:
    """Refocusing for equal couplings: every pair accumulates alpha * T.

    The schedule has m equal intervals, m the smallest supported Hadamard
    order covering the sequence coloring (or ``min_order`` if larger); the
    parity of qubit q during interval i is the sign of H(m)[i, column(q)].
    """
    if not graph.is_uniform():
        raise DomainError("compile_uniform requires equal couplings on all edges")
    partition.validate_for(graph)
    if total_time < 0:
        raise DomainError("total time must be nonnegative")
    return RefocusSchedule(graph.n_qubits, _window_segments(graph, partition, total_time, min_order))


def _pair_angles(partition: EntityPartition, target) -> dict:
    if isinstance(target, dict):
        angles = {}
        for pair in partition.pairs:
            key = pair if pair in target else (pair[1], pair[0])
            if key not in target:
                raise DomainError(f"no target angle for pair {pair}")
            angles[pair] = target[key]
        return angles
    return {pair: target for pair in partition.pairs}


def compile_spread(
    graph: CouplingGraph,
    partition: EntityPartition,
    target,
    min_order: int | None = None,
) -> RefocusSchedule:
    """Global refocusing operation for arbitrary (spread) couplings.

    ``target`` is a single accumulated ZZ angle for every pair, or a mapping
    pair -> angle (simultaneous unequal-angle layers compile the same way).
    Windows are emitted in timeline order: pairs with larger excess time stay
    destroyed longer, so the all-active window comes last.
    """
    partition.validate_for(graph)
    angles = _pair_angles(partition, target)
    for pair, theta in angles.items():
        if theta < 0:
            raise DomainError(f"target angle for pair {pair} must be nonnegative")

    n = graph.n_qubits
    if not partition.pairs:
        return RefocusSchedule(n, [])

    active_time = {pair: angles[pair] / graph.coupling(*pair) for pair in partition.pairs}
    total = max(active_time.values())
    if total == 0:
        return RefocusSchedule(n, [])
    tau = {pair: total - active_time[pair] for pair in partition.pairs}

    boundaries = sorted(set(tau.values()) | {total})
    if boundaries[0] != 0:
        boundaries = [total * 0] + boundaries  # zero of the right numeric type

    segments: list[Segment] = []
    for prev, cur in zip(boundaries, boundaries[1:]):
        width = cur - prev
        if width == 0 or (isinstance(width, float) and width < 1e-15):
            continue
        active = [pair for pair in partition.pairs if tau[pair] <= prev]
        window_partition = EntityPartition.from_pairs(n, active)
        segments.extend(_window_segments(graph, window_partition, width, min_order))
    return RefocusSchedule(n, segments)


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

def effective_coupling(schedule: RefocusSchedule, graph: CouplingGraph) -> dict:
    """Accumulated angle C_pq = alpha_pq * sum_i s_p(i) s_q(i) t_i per edge.

    Exact (Fraction) whenever the schedule durations and the coupling are
    rational.
    """
    if graph.n_qubits != schedule.n_qubits:
        raise DomainError("schedule and graph qubit counts differ")
    out = {}
    for (p, q), alpha in sorted(graph.couplings.items()):
        acc = Fraction(0)
        for seg in schedule.segments:
            sign = 1 if seg.parities[p] == seg.parities[q] else -1
            acc = acc + sign * seg.duration
        out[(p, q)] = alpha * acc
    return out


@dataclass
class VerificationReport:
    passed: bool
    failures: list
    exact: bool
    unitary_checked: bool = False
    unitary_distance: float | None = None

    def summary(self) -> str:
        status = "pass" if self.passed else "FAIL"
        lines = [
            f"schedule verification: {status} "
            f"({'exact rational' if self.exact else 'tolerance 1e-12'} arithmetic)"
        ]
        for edge, expected, actual in self.failures:
            lines.append(f"  edge {edge}: expected {expected}, got {actual}")
        if self.unitary_checked:
            lines.append(f"  unitary cross-check distance: {self.unitary_distance:.3e}")
        return "\n".join(lines)


def _target_unitary_diag(n: int, angles: dict) -> np.ndarray:
    idx = np.arange(2 ** n)
    phases = np.zeros(2 ** n)
    for (p, q), theta in angles.items():
        zp = 1.0 - 2.0 * ((idx >> (n - 1 - p)) & 1)
        zq = 1.0 - 2.0 * ((idx >> (n - 1 - q)) & 1)
        phases += float(theta) * zp * zq
    return np.exp(-1j * phases)


def verify_schedule(
    schedule: RefocusSchedule,
    graph: CouplingGraph,
    target: CompileTarget,
    unitary_check: bool | None = None,
    tol: float = 1e-12,
) -> VerificationReport:
    """Check C_pq equals the target on pairs and zero on every other edge.

    Rational inputs are compared exactly.  For n <= 6 (or when forced by
    ``unitary_check``) the schedule is also lowered to a circuit and its
    unitary compared against the target product of two-qubit ZZ exponentials.
    """
    angles = _pair_angles(target.partition, target.angles)
    coupled = effective_coupling(schedule, graph)
    pair_set = set(target.partition.pairs)

    exact = schedule.is_exact() and all(
        isinstance(alpha, Fraction) for alpha in graph.couplings.values()
    ) and all(isinstance(a, Fraction) for a in angles.values())

    failures = []
    for edge, actual in coupled.items():
        expected = angles.get(edge, Fraction(0)) if edge in pair_set else Fraction(0)
        if exact:
            ok = actual == expected
        else:
            ok = abs(float(actual) - float(expected)) <= tol
        if not ok:
            failures.append((edge, expected, actual))

    report = VerificationReport(passed=not failures, failures=failures, exact=exact)

    if unitary_check is None:
        unitary_check = graph.n_qubits <= 6
    if unitary_check and graph.n_qubits <= 10:
        circ = schedule_to_circuit(schedule, graph)
        actual_u = circuit_unitary(circ)
        target_diag = _target_unitary_diag(graph.n_qubits, {e: angles[e] for e in pair_set})
        dist = phase_aligned_distance(actual_u, np.diag(target_diag))
        report.unitary_checked = True
        report.unitary_distance = dist
        if dist > 1e-10:
            report.passed = False
    return report


def schedule_to_circuit(schedule: RefocusSchedule, graph: CouplingGraph) -> Circuit:
    """Lower a schedule to X layers interleaved with analog blocks.

    X acts on a qubit exactly at its parity transitions; leading and trailing
    layers restore even parity, so the circuit's unitary equals the product
    of exp(-i C_pq Z_p Z_q) over all edges with no leftover single-qubit
    action.
    """
    if graph.n_qubits != schedule.n_qubits:
        raise DomainError("schedule and graph qubit counts differ")
    n = schedule.n_qubits
    circuit = Circuit(n, graph=graph)
    parity = (0,) * n
    for seg in schedule.segments:
        flips = tuple(q for q in range(n) if parity[q] != seg.parities[q])
        if flips:
            circuit.add(GateLayer(tuple(("x", q, None) for q in flips)))
        parity = seg.parities
        circuit.add(AnalogBlock(seg.duration))
    flips = tuple(q for q in range(n) if parity[q] != 0)
    if flips:
        circuit.add(GateLayer(tuple(("x", q, None) for q in flips)))
    return circuit


# ---------------------------------------------------------------------------
# Entangler-count formulas (circuit depth per Trotter step)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EntanglerCount:
    kind: str
    n_qubits: int
    regime: str
    closed_form: int | None
    measured: int
    scaling: str


def _closed_form(kind: str, n: int) -> tuple[int | None, str]:
    if kind == "chain":
        return 6 * n, "O(n)"
    if kind == "grid":
        grid_dims(n)  # raises if n has no 2-D factorization
        return 12 * n, "O(n)"
    if kind == "all-to-all":
        m = n // 2 + 2
        if m & (m - 1) != 0:
            raise DomainError(
                f"all-to-all closed form needs n/2+2 to be a power of two (n={n})"
            )
        return 3 * n * n // 2 + 6 * n, "O(n^2)"
    if kind == "digital":
        return (3 * n * n - 3 * n) // 2, "O(n^2) gates, O(n) depth"
    raise DomainError(f"unknown topology kind '{kind}'")


def entangler_count(kind: str, n: int, regime: str = "uniform", seed=0) -> EntanglerCount:
    """Closed-form and measured entangler applications for one Trotter step.

    ``kind`` is one of chain / grid / all-to-all (analog J applications) or
    digital (CNOT count of the digital baseline).  The spread regime has no
    closed form; the measured count of an actual compilation with disordered
    couplings is returned with its O(n^2) scaling tag.
    """
    from . import network  # local import: network builds on this module
    from .fermion import FermionHamiltonian
    from .topology import chain as chain_graph, complete, grid as grid_graph

    if kind not in ("chain", "grid", "all-to-all", "digital"):
        raise DomainError(f"unknown topology kind '{kind}'")
    if n % 2 != 0 or n < 4:
        raise DomainError("entangler counts are defined for even n >= 4")
    if regime not in ("uniform", "spread"):
        raise DomainError(f"unknown regime '{regime}'")
    if kind == "digital" and regime == "spread":
        raise DomainError("the digital baseline has no coupling-spread regime")

    closed, scaling = _closed_form(kind, n) if regime == "uniform" else (None, "O(n^2)")

    h = FermionHamiltonian.zero(n)
    if kind == "digital":
        circ, _ = network.trotter_step_spinless(h, 0.1, backend="digital")
        measured = circ.count_two_qubit_gates("cnot")
        return EntanglerCount(kind, n, regime, closed, measured, scaling)

    if kind == "chain":
        graph = chain_graph(n)
    elif kind == "grid":
        graph = grid_graph(*grid_dims(n))
    else:
        graph = complete(n)

    if regime == "spread":
        rng = np.random.default_rng(seed)
        couplings = {
            edge: 1.0 + 0.5 * rng.uniform(0.0, 1.0) for edge in graph.edges
        }
        graph = graph.with_couplings(couplings)

    circ, _ = network.trotter_step_spinless(h, 0.1, backend="da", graph=graph)
    measured = circ.count_analog_blocks()
    return EntanglerCount(kind, n, regime, closed, measured, scaling)
