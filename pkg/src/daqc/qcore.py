"""Dense complex linear algebra for small qubit registers.

Conventions used throughout the package:

* qubit 0 is the first tensor factor, i.e. the most significant bit of a
  basis index;
* all times are dimensionless products ``alpha * t`` (hbar = 1);
* randomness always flows through ``numpy.random.default_rng`` seeded
  explicitly, so every result is reproducible from the seeds that appear in
  configs and CLI flags.

Everything here is a pure function of its inputs; returned arrays are fresh.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResourceLimitError
from .topology import CouplingGraph

MAX_QUBITS = 12

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD_GATE = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]])


def rz(theta: float) -> np.ndarray:
    return np.array([[np.exp(-1j * theta / 2), 0], [0, np.exp(1j * theta / 2)]])


GATES_1Q = {"x": PAULI_X, "y": PAULI_Y, "z": PAULI_Z, "h": HADAMARD_GATE}
GATES_1Q_PARAM = {"rx": rx, "ry": ry, "rz": rz}


def gate_matrix_1q(name: str, angle: float | None = None) -> np.ndarray:
    if name in GATES_1Q:
        return GATES_1Q[name]
    if name in GATES_1Q_PARAM:
        if angle is None:
            raise DomainError(f"gate '{name}' needs an angle")
        return GATES_1Q_PARAM[name](angle)
    raise DomainError(f"unknown single-qubit gate '{name}'")


def check_qubit_count(n: int, limit: int = MAX_QUBITS) -> None:
    if n > limit:
        raise ResourceLimitError(f"{n} qubits exceed the dense-simulation limit of {limit}")


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------

@dataclass
class QuantumState:
    """Statevector or density matrix over n qubits."""

    kind: str  # "statevector" | "density"
    n_qubits: int
    data: np.ndarray

    @classmethod
    def statevector(cls, vec: np.ndarray) -> "QuantumState":
        vec = np.asarray(vec, dtype=complex).reshape(-1)
        n = int(np.log2(vec.size))
        state = cls("statevector", n, vec)
        state.validate()
        return state

    @classmethod
    def density_matrix(cls, mat: np.ndarray) -> "QuantumState":
        mat = np.asarray(mat, dtype=complex)
        n = int(np.log2(mat.shape[0]))
        state = cls("density", n, mat)
        state.validate()
        return state

    @classmethod
    def computational(cls, n_qubits: int, index: int = 0) -> "QuantumState":
        vec = np.zeros(2 ** n_qubits, dtype=complex)
        vec[index] = 1.0
        return cls("statevector", n_qubits, vec)

    def validate(self) -> None:
        dim = 2 ** self.n_qubits
        if self.kind == "statevector":
            if self.data.shape != (dim,):
                raise DomainError("statevector dimension mismatch")
            if abs(np.linalg.norm(self.data) - 1.0) > 1e-12:
                raise DomainError("statevector is not normalized")
        elif self.kind == "density":
            if self.data.shape != (dim, dim):
                raise DomainError("density matrix dimension mismatch")
            if np.abs(self.data - self.data.conj().T).max() > 1e-12:
                raise DomainError("density matrix is not Hermitian")
            if abs(np.trace(self.data) - 1.0) > 1e-12:
                raise DomainError("density matrix trace differs from 1")
            if np.linalg.eigvalsh(self.data).min() < -1e-10:
                raise DomainError("density matrix is not positive semidefinite")
        else:
            raise DomainError(f"unknown state kind '{self.kind}'")

    def as_density(self) -> np.ndarray:
        if self.kind == "density":
            return self.data
        return np.outer(self.data, self.data.conj())


# ---------------------------------------------------------------------------
# Tensor application helpers
# ---------------------------------------------------------------------------

def _apply_on_axes(arr: np.ndarray, mat: np.ndarray, axes: tuple[int, ...]) -> np.ndarray:
    """Contract ``mat`` (acting on k binary axes) into ``arr`` at ``axes``."""
    k = len(axes)
    mat_t = mat.reshape((2,) * (2 * k))
    out = np.tensordot(mat_t, arr, axes=(tuple(range(k, 2 * k)), axes))
    return np.moveaxis(out, tuple(range(k)), axes)


def apply_1q(state: np.ndarray, n: int, qubit: int, mat: np.ndarray) -> np.ndarray:
    """Apply a 2x2 unitary to one qubit of a statevector (extra axes allowed)."""
    extra = state.shape[1:] if state.ndim > 1 else ()
    tensor = state.reshape((2,) * n + extra)
    tensor = _apply_on_axes(tensor, mat, (qubit,))
    return tensor.reshape(state.shape)

def apply_2q(state: np.ndarray, n: int, q0: int, q1: int, mat: np.ndarray) -> np.ndarray:
    """Apply a 4x4 unitary to qubits (q0, q1); q0 is the gate's first factor."""
    extra = state.shape[1:] if state.ndim > 1 else ()
    tensor = state.reshape((2,) * n + extra)
    tensor = _apply_on_axes(tensor, mat, (q0, q1))
    return tensor.reshape(state.shape)


def apply_1q_density(rho: np.ndarray, n: int, qubit: int, mat: np.ndarray) -> np.ndarray:
    tensor = rho.reshape((2,) * (2 * n))
    tensor = _apply_on_axes(tensor, mat, (qubit,))
    tensor = _apply_on_axes(tensor, mat.conj(), (n + qubit,))
    return tensor.reshape(rho.shape)


def apply_2q_density(rho: np.ndarray, n: int, q0: int, q1: int, mat: np.ndarray) -> np.ndarray:
    tensor = rho.reshape((2,) * (2 * n))
    tensor = _apply_on_axes(tensor, mat, (q0, q1))
    tensor = _apply_on_axes(tensor, mat.conj(), (n + q0, n + q1))
    return tensor.reshape(rho.shape)


def apply_kraus_1q(rho: np.ndarray, n: int, qubit: int, kraus: list[np.ndarray]) -> np.ndarray:
    tensor = rho.reshape((2,) * (2 * n))
    out = np.zeros_like(tensor)
    for k in kraus:
        term = _apply_on_axes(tensor, k, (qubit,))
        out += _apply_on_axes(term, k.conj(), (n + qubit,))
    return out.reshape(rho.shape)


# ---------------------------------------------------------------------------
# ZZ evolution
# ---------------------------------------------------------------------------

def zz_phases(graph: CouplingGraph, duration: float) -> np.ndarray:
    """Diagonal of the accumulated ZZ phase sum_edges alpha_pq z_p z_q t."""
    n = graph.n_qubits
    check_qubit_count(n)
    idx = np.arange(2 ** n)
    total = np.zeros(2 ** n)
    t = float(duration)
    for (p, q), alpha in graph.couplings.items():
        zp = 1.0 - 2.0 * ((idx >> (n - 1 - p)) & 1)
        zq = 1.0 - 2.0 * ((idx >> (n - 1 - q)) & 1)
        total += float(alpha) * t * zp * zq
    return total


def zz_evolution(graph: CouplingGraph, duration: float) -> np.ndarray:
    """Global entangler: prod over edges of exp(-i alpha_pq Z_p Z_q t).

    All factors are diagonal and commute, so the product order is irrelevant.
    """
    if duration < 0:
        raise DomainError("duration must be nonnegative")
    return np.diag(np.exp(-1j * zz_phases(graph, duration)))


def zz_evolution_diagonal(graph: CouplingGraph, duration: float) -> np.ndarray:
    """Diagonal entries of :func:`zz_evolution` (cheaper to apply to states)."""
    return np.exp(-1j * zz_phases(graph, duration))


# ---------------------------------------------------------------------------
# Fidelities and distances
# ---------------------------------------------------------------------------

def _col(mat: np.ndarray) -> np.ndarray:
    # column-major flattening: the fixed convention for the Col map
    return np.asarray(mat).flatten(order="F")


def process_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """Overlap of column-flattened process matrices, in [0, 1]."""
    ca, cb = _col(a), _col(b)
    if ca.shape != cb.shape:
        raise DomainError("process matrices must have the same dimension")
    na = np.vdot(ca, ca).real
    nb = np.vdot(cb, cb).real
    if na == 0.0 or nb == 0.0:
        raise DomainError("process fidelity of a zero matrix is undefined")
    return float(abs(np.vdot(ca, cb)) ** 2 / (na * nb))


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(mat)
    if vals.min() < -1e-10:
        raise DomainError("matrix is not positive semidefinite")
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def state_fidelity(rho, sigma) -> float:
    """Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    r = rho.as_density() if isinstance(rho, QuantumState) else np.asarray(rho, dtype=complex)
    s = sigma.as_density() if isinstance(sigma, QuantumState) else np.asarray(sigma, dtype=complex)
    if r.ndim == 1:
        r = np.outer(r, r.conj())
    if s.ndim == 1:
        s = np.outer(s, s.conj())
    if r.shape != s.shape:
        raise DomainError("states must have the same dimension")
    sq = _psd_sqrt(r)
    inner = sq @ s @ sq
    vals = np.linalg.eigvalsh((inner + inner.conj().T) / 2)
    vals = np.clip(vals, 0.0, None)
    f = float(np.sum(np.sqrt(vals)) ** 2)
    return min(f, 1.0) if f <= 1.0 + 1e-9 else f


def pure_fidelity(psi: np.ndarray, phi: np.ndarray) -> float:
    """|<psi|phi>|^2 shortcut for two statevectors."""
    return float(abs(np.vdot(psi, phi)) ** 2)


def haar_random_state(n_qubits: int, seed) -> QuantumState:
    """Haar-random statevector: normalized i.i.d. standard complex Gaussians."""
    check_qubit_count(n_qubits)
    rng = np.random.default_rng(seed)
    dim = 2 ** n_qubits
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    vec /= np.linalg.norm(vec)
    return QuantumState("statevector", n_qubits, vec)


def unitary_distance_up_to_phase(a: np.ndarray, b: np.ndarray) -> float:
    """Frobenius-normalized distance minimized over a global phase.

    Computed as sqrt(2 - 2 |tr(A^dag B)| / dim); zero exactly when
    A = e^{i phi} B.  The square root amplifies roundoff, so the numerical
    floor of this metric is about 1.5e-8; use
    :func:`phase_aligned_distance` when a tighter comparison is needed.
    """
    if a.shape != b.shape:
        raise DomainError("unitaries must have the same dimension")
    dim = a.shape[0]
    overlap = abs(np.trace(a.conj().T @ b)) / dim
    return float(np.sqrt(max(0.0, 2.0 - 2.0 * overlap)))


def phase_aligned_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Max-entry difference after aligning the global phase of b to a."""
    if a.shape != b.shape:
        raise DomainError("unitaries must have the same dimension")
    tr = np.trace(a.conj().T @ b)
    if abs(tr) < 1e-300:
        # orthogonal in trace inner product: no phase helps
        return float(np.abs(a - b).max())
    phase = tr / abs(tr)
    return float(np.abs(a - b / phase).max())


def is_unitary(mat: np.ndarray, tol: float = 1e-10) -> bool:
    dim = mat.shape[0]
    return bool(np.abs(mat.conj().T @ mat - np.eye(dim)).max() <= tol)
