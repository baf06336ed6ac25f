"""Connectivity graphs, Hadamard matrices, and sequence assignment.

A qubit network is a :class:`CouplingGraph`: an undirected graph whose edges
carry positive ZZ coupling constants.  Couplings given as ``int`` or
``fractions.Fraction`` are kept exact so that downstream schedule arithmetic
can be verified in rational arithmetic; ``float`` couplings are allowed and
fall back to tolerance-based verification.

Sequence assignment works on the *deformed* graph: the two qubits of every
interaction pair are merged into one node, and the merged node inherits the
union of the pair's neighbourhoods.  Entities (merged pairs and single
qubits) are then greedily coloured; entities on different colours follow
orthogonal Hadamard columns and decouple exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import DomainError

Coupling = Union[Fraction, float]


def as_coupling(value) -> Coupling:
    """Normalize a coupling constant: ints become exact Fractions."""
    if isinstance(value, bool):
        raise DomainError("coupling must be a number")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, (Fraction, float)):
        return value
    raise DomainError(f"unsupported coupling type: {type(value).__name__}")


def _norm_edge(p: int, q: int) -> tuple[int, int]:
    return (p, q) if p < q else (q, p)


@dataclass
class CouplingGraph:
    """Qubit connectivity with per-edge coupling constants alpha_pq > 0."""

    n_qubits: int
    couplings: dict[tuple[int, int], Coupling] = field(default_factory=dict)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise DomainError("graph needs at least one qubit")
        normed: dict[tuple[int, int], Coupling] = {}
        for (p, q), alpha in self.couplings.items():
            if p == q:
                raise DomainError(f"self-loop on qubit {p}")
            if not (0 <= p < self.n_qubits and 0 <= q < self.n_qubits):
                raise DomainError(f"edge ({p},{q}) out of range")
            alpha = as_coupling(alpha)
            if alpha <= 0:
                raise DomainError(f"coupling on edge ({p},{q}) must be positive")
            normed[_norm_edge(p, q)] = alpha
        self.couplings = normed

    @property
    def edges(self) -> list[tuple[int, int]]:
        return sorted(self.couplings)

    def coupling(self, p: int, q: int) -> Coupling:
        return self.couplings[_norm_edge(p, q)]

    def has_edge(self, p: int, q: int) -> bool:
        return _norm_edge(p, q) in self.couplings

    def neighbors(self, p: int) -> set[int]:
        out = set()
        for (a, b) in self.couplings:
            if a == p:
                out.add(b)
            elif b == p:
                out.add(a)
        return out

    def is_uniform(self) -> bool:
        values = set(self.couplings.values())
        return len(values) <= 1

    def with_couplings(self, mapping: Mapping[tuple[int, int], Coupling]) -> "CouplingGraph":
        """Copy of the graph with some or all couplings replaced."""
        new = dict(self.couplings)
        for edge, alpha in mapping.items():
            edge = _norm_edge(*edge)
            if edge not in new:
                raise DomainError(f"edge {edge} not in graph")
            new[edge] = as_coupling(alpha)
        return CouplingGraph(self.n_qubits, new)


def chain(n: int, coupling: Coupling = 1) -> CouplingGraph:
    """Linear connectivity 0-1-2-...-(n-1)."""
    coupling = as_coupling(coupling)
    return CouplingGraph(n, {(i, i + 1): coupling for i in range(n - 1)})


def complete(n: int, coupling: Coupling = 1) -> CouplingGraph:
    """All-to-all connectivity."""
    coupling = as_coupling(coupling)
    return CouplingGraph(n, {(p, q): coupling for p in range(n) for q in range(p + 1, n)})


def grid(rows: int, cols: int, coupling: Coupling = 1) -> CouplingGraph:
    """Square-lattice connectivity with boustrophedon (snake) qubit numbering.

    Qubits are numbered along the snake path so that consecutive indices are
    always adjacent; the embedded chain 0-1-...-(n-1) is the Jordan-Wigner
    order used by the SWAP network.
    """
    coupling = as_coupling(coupling)

    def idx(r: int, c: int) -> int:
        return r * cols + (c if r % 2 == 0 else cols - 1 - c)

    edges = {}
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges[_norm_edge(idx(r, c), idx(r, c + 1))] = coupling
            if r + 1 < rows:
                edges[_norm_edge(idx(r, c), idx(r + 1, c))] = coupling
    return CouplingGraph(rows * cols, edges)


def grid_dims(n: int) -> tuple[int, int]:
    """Most square rows x cols factorization with rows <= cols."""
    best = None
    for rows in range(1, int(np.sqrt(n)) + 1):
        if n % rows == 0:
            best = (rows, n // rows)
    if best is None or best[0] == 1:
        raise DomainError(f"{n} qubits do not form a two-dimensional grid")
    return best


def ladder(n_sites: int, coupling: Coupling = 1) -> CouplingGraph:
    """Two-leg ladder for spin-1/2 simulation.

    Qubit 2i holds site i of the up species, qubit 2i+1 site i of the down
    species; rungs connect the two species of one site.
    """
    coupling = as_coupling(coupling)
    edges = {}
    for i in range(n_sites):
        edges[(2 * i, 2 * i + 1)] = coupling
        if i + 1 < n_sites:
            edges[(2 * i, 2 * i + 2)] = coupling
            edges[(2 * i + 1, 2 * i + 3)] = coupling
    return CouplingGraph(2 * n_sites, edges)


# ---------------------------------------------------------------------------
# Hadamard matrices (Sylvester construction)
# ---------------------------------------------------------------------------

def is_supported_order(m: int) -> bool:
    return m >= 1 and (m & (m - 1)) == 0


def next_hadamard_order(k: int) -> int:
    """Smallest supported Hadamard order >= k."""
    if k < 1:
        return 1
    m = 1
    while m < k:
        m *= 2
    return m


def hadamard_matrix(m: int) -> np.ndarray:
    """Exact +-1 matrix of order m with H H^T = m I (Sylvester construction).

    Supported orders are 1 and the powers of two; other orders raise a
    DomainError naming the next supported order.
    """
    if not is_supported_order(m):
        raise DomainError(
            f"Hadamard order {m} is not supported by the Sylvester construction; "
            f"next supported order is {next_hadamard_order(m)}"
        )
    h = np.array([[1]], dtype=np.int64)
    block = np.array([[1, 1], [1, -1]], dtype=np.int64)
    while h.shape[0] < m:
        h = np.kron(h, block)
    return h


# ---------------------------------------------------------------------------
# Entity partitions and graph deformation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EntityPartition:
    """Disjoint interaction pairs plus the remaining single qubits."""

    pairs: tuple[tuple[int, int], ...]
    singles: tuple[int, ...]

    @classmethod
    def from_pairs(cls, n_qubits: int, pairs: Iterable[Sequence[int]]) -> "EntityPartition":
        normed = tuple(sorted(_norm_edge(p, q) for p, q in pairs))
        used = [q for pair in normed for q in pair]
        if len(set(used)) != len(used):
            raise DomainError("interaction pairs must be disjoint")
        singles = tuple(q for q in range(n_qubits) if q not in set(used))
        return cls(normed, singles)

    @property
    def entities(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.pairs) + tuple((s,) for s in self.singles)

    def validate_for(self, graph: CouplingGraph) -> None:
        seen = set()
        for (p, q) in self.pairs:
            if not graph.has_edge(p, q):
                raise DomainError(f"interaction pair ({p},{q}) is not an edge of the graph")
            seen.update((p, q))
        seen.update(self.singles)
        if seen != set(range(graph.n_qubits)):
            raise DomainError("pairs and singles must partition the qubit set")


@dataclass(frozen=True)
class DeformedGraph:
    """Entity-level graph obtained by merging each interaction pair."""

    entities: tuple[tuple[int, ...], ...]
    adjacency: tuple[frozenset, ...]

    @property
    def n_entities(self) -> int:
        return len(self.entities)

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])


def deform_graph(graph: CouplingGraph, partition: EntityPartition) -> DeformedGraph:
    """Merge pair qubits; a merged node connects to everything either qubit saw."""
    partition.validate_for(graph)
    entities = partition.entities
    owner = {}
    for i, ent in enumerate(entities):
        for q in ent:
            owner[q] = i
    adj: list[set] = [set() for _ in entities]
    for (p, q) in graph.edges:
        a, b = owner[p], owner[q]
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    return DeformedGraph(entities, tuple(frozenset(s) for s in adj))


def color_entities(deformed: DeformedGraph) -> list[int]:
    """Greedy proper coloring, vertices in descending degree (ties by index)."""
    order = sorted(range(deformed.n_entities), key=lambda i: (-deformed.degree(i), i))
    colors = [-1] * deformed.n_entities
    for i in order:
        taken = {colors[j] for j in deformed.adjacency[i] if colors[j] >= 0}
        c = 0
        while c in taken:
            c += 1
        colors[i] = c
    return colors


def required_sequences(graph: CouplingGraph, partition: EntityPartition) -> int:
    """Smallest supported Hadamard order covering the sequence-assignment coloring."""
    colors = color_entities(deform_graph(graph, partition))
    return next_hadamard_order(max(colors) + 1 if colors else 1)


@dataclass(frozen=True)
class SequenceAssignment:
    """Hadamard column per entity; both qubits of a pair share one column."""

    order: int
    entity_columns: tuple[int, ...]
    entities: tuple[tuple[int, ...], ...]

    def column_of(self, qubit: int) -> int:
        for ent, col in zip(self.entities, self.entity_columns):
            if qubit in ent:
                return col
        raise DomainError(f"qubit {qubit} not covered by assignment")

    def qubit_columns(self, n_qubits: int) -> list[int]:
        cols = [-1] * n_qubits
        for ent, col in zip(self.entities, self.entity_columns):
            for q in ent:
                cols[q] = col
        return cols


def assign_sequences(
    graph: CouplingGraph, partition: EntityPartition, min_order: int | None = None
) -> SequenceAssignment:
    """Proper coloring of the deformed graph mapped onto Hadamard columns.

    ``min_order`` forces at least that Hadamard order (still supported),
    which lets a caller schedule several stages with one uniform interval
    count.
    """
    deformed = deform_graph(graph, partition)
    colors = color_entities(deformed)
    m = next_hadamard_order(max(colors) + 1 if colors else 1)
    if min_order is not None:
        m = max(m, next_hadamard_order(min_order))
    return SequenceAssignment(m, tuple(colors), deformed.entities)
