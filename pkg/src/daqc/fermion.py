"""Fermionic Hamiltonians and their Jordan-Wigner qubit images.

Spinless Hamiltonians follow the ordered-sum form

    H = sum_n U_n a+_n a_n + sum_{m != n} T_nm a+_n a_m
        + sum_{m != n} V_nm a+_n a_n a+_m a_m

so the total density-density coefficient of an unordered pair {n, m} is
V_nm + V_mn.  Hopping is restricted to real symmetric T: the fermionic
simulation gate encodes a single real hopping angle, so complex T has no
circuit counterpart here and is rejected.

Jordan-Wigner convention: qubit q holds mode ``order[q]``; |1> means
occupied; the lowering operator at position p carries a Z string over all
positions below p.  The convention is fixed once and checked against an
independent occupation-number oracle in the tests rather than against any
external library.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import DomainError, ResourceLimitError
from .qcore import I2, PAULI_Z

MAX_DENSE_MODES = 10

_SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |1> -> |0>


@dataclass(frozen=True)
class ModeOrder:
    """Permutation mapping qubit position -> fermionic mode index."""

    perm: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise DomainError("mode order must be a permutation")

    @classmethod
    def identity(cls, n: int) -> "ModeOrder":
        return cls(tuple(range(n)))

    def reversed(self) -> "ModeOrder":
        return ModeOrder(tuple(reversed(self.perm)))

    def position_of(self, mode: int) -> int:
        return self.perm.index(mode)

    def __len__(self) -> int:
        return len(self.perm)


@dataclass
class FermionHamiltonian:
    """Coefficient tables of a spinless fermionic Hamiltonian."""

    n_modes: int
    onsite: np.ndarray  # U_n
    hopping: np.ndarray  # T_nm, real symmetric
    density: np.ndarray  # V_nm, real, zero diagonal

    def __post_init__(self):
        self.onsite = np.asarray(self.onsite, dtype=float).reshape(self.n_modes)
        self.hopping = np.asarray(self.hopping, dtype=float)
        self.density = np.asarray(self.density, dtype=float)
        shape = (self.n_modes, self.n_modes)
        if self.hopping.shape != shape or self.density.shape != shape:
            raise DomainError("coefficient tables must be n_modes x n_modes")
        if np.abs(self.hopping - self.hopping.T).max() > 1e-12:
            raise DomainError("hopping matrix must be symmetric (complex hopping unsupported)")
        if np.abs(np.diag(self.density)).max() > 0:
            raise DomainError("density-density matrix must have zero diagonal")

    def pair_hopping(self, n: int, m: int) -> float:
        """Coefficient of a+_n a_m + a+_m a_n for the unordered pair."""
        return float(self.hopping[n, m])

    def pair_density(self, n: int, m: int) -> float:
        """Total coefficient of the number-number term for the unordered pair."""
        return float(self.density[n, m] + self.density[m, n])

    @classmethod
    def zero(cls, n_modes: int) -> "FermionHamiltonian":
        z = np.zeros((n_modes, n_modes))
        return cls(n_modes, np.zeros(n_modes), z, z.copy())


@dataclass
class SpinfulHamiltonian:
    """Spin-1/2 Hamiltonian: separate hopping per species, on-site coupling."""

    n_sites: int
    hopping_up: np.ndarray  # T_nm
    hopping_down: np.ndarray  # U_nm
    onsite: np.ndarray  # V_n

    def __post_init__(self):
        shape = (self.n_sites, self.n_sites)
        self.hopping_up = np.asarray(self.hopping_up, dtype=float)
        self.hopping_down = np.asarray(self.hopping_down, dtype=float)
        self.onsite = np.asarray(self.onsite, dtype=float).reshape(self.n_sites)
        if self.hopping_up.shape != shape or self.hopping_down.shape != shape:
            raise DomainError("hopping tables must be n_sites x n_sites")
        for mat in (self.hopping_up, self.hopping_down):
            if np.abs(mat - mat.T).max() > 1e-12:
                raise DomainError("hopping matrices must be symmetric")


# ---------------------------------------------------------------------------
# Dense Jordan-Wigner construction
# ---------------------------------------------------------------------------

def _kron_all(ops) -> np.ndarray:
    return reduce(np.kron, ops)


def _lowering(n: int, position: int) -> np.ndarray:
    ops = [PAULI_Z] * position + [_SIGMA_MINUS] + [I2] * (n - position - 1)
    return _kron_all(ops)


def jordan_wigner(h: FermionHamiltonian, order: ModeOrder | None = None) -> np.ndarray:
    """Dense Hermitian qubit image of ``h`` under the given mode order."""
    n = h.n_modes
    if n > MAX_DENSE_MODES:
        raise ResourceLimitError(f"{n} modes exceed the dense JW limit of {MAX_DENSE_MODES}")
    if order is None:
        order = ModeOrder.identity(n)
    if len(order) != n:
        raise DomainError("mode order length must match n_modes")
    pos = {order.perm[q]: q for q in range(n)}

    lower = [_lowering(n, p) for p in range(n)]
    raise_ = [m.conj().T for m in lower]
    number = [raise_[p] @ lower[p] for p in range(n)]

    dim = 2 ** n
    out = np.zeros((dim, dim), dtype=complex)
    for m in range(n):
        if h.onsite[m] != 0.0:
            out += h.onsite[m] * number[pos[m]]
    for m in range(n):
        for k in range(n):
            if m == k:
                continue
            if h.hopping[m, k] != 0.0:
                out += h.hopping[m, k] * (raise_[pos[m]] @ lower[pos[k]])
            if h.density[m, k] != 0.0:
                out += h.density[m, k] * (number[pos[m]] @ number[pos[k]])
    return out


def jordan_wigner_spinful(h: SpinfulHamiltonian) -> np.ndarray:
    """Qubit image of a spinful Hamiltonian on the interleaved ladder layout.

    Qubit 2i holds site i of the up species, qubit 2i+1 the down species.
    Each species carries its own Jordan-Wigner string over its own leg only;
    the two species never mix except through string-free density terms, so
    the per-species convention is exact.
    """
    ns = h.n_sites
    n = 2 * ns
    if ns > MAX_DENSE_MODES // 2:
        raise ResourceLimitError(f"{ns} sites exceed the dense spinful limit")

    def species_lowering(site: int, offset: int) -> np.ndarray:
        table = {2 * j + offset: PAULI_Z for j in range(site)}
        table[2 * site + offset] = _SIGMA_MINUS
        return _kron_all([table.get(p, I2) for p in range(n)])

    low_up = [species_lowering(i, 0) for i in range(ns)]
    low_dn = [species_lowering(i, 1) for i in range(ns)]
    num_up = [m.conj().T @ m for m in low_up]
    num_dn = [m.conj().T @ m for m in low_dn]

    dim = 2 ** n
    out = np.zeros((dim, dim), dtype=complex)
    for i in range(ns):
        for j in range(ns):
            if i == j:
                continue
            if h.hopping_up[i, j] != 0.0:
                out += h.hopping_up[i, j] * (low_up[i].conj().T @ low_up[j])
            if h.hopping_down[i, j] != 0.0:
                out += h.hopping_down[i, j] * (low_dn[i].conj().T @ low_dn[j])
    for i in range(ns):
        if h.onsite[i] != 0.0:
            out += h.onsite[i] * (num_up[i] @ num_dn[i])
    return out


def exact_evolution(h_matrix: np.ndarray, dt: float) -> np.ndarray:
    """exp(-i H dt) via Hermitian eigendecomposition."""
    h_matrix = np.asarray(h_matrix, dtype=complex)
    if h_matrix.shape[0] > 2 ** MAX_DENSE_MODES:
        raise ResourceLimitError("matrix too large for dense exponentiation")
    if np.abs(h_matrix - h_matrix.conj().T).max() > 1e-9:
        raise DomainError("exact_evolution requires a Hermitian matrix")
    vals, vecs = np.linalg.eigh((h_matrix + h_matrix.conj().T) / 2)
    return (vecs * np.exp(-1j * vals * dt)) @ vecs.conj().T


def random_hamiltonian(n_modes: int, bound: float, seed) -> FermionHamiltonian:
    """Uniform coefficient tables: T, V entries i.i.d. in [-bound, bound].

    The hopping table is sampled on the upper triangle and mirrored so the
    entries stay uniformly distributed; on-site terms are zero (single-qubit
    rotations absorb them).
    """
    if bound < 0:
        raise DomainError("bound must be nonnegative")
    rng = np.random.default_rng(seed)
    hop = np.zeros((n_modes, n_modes))
    upper = np.triu_indices(n_modes, k=1)
    hop[upper] = rng.uniform(-bound, bound, size=len(upper[0]))
    hop = hop + hop.T
    dens = rng.uniform(-bound, bound, size=(n_modes, n_modes))
    np.fill_diagonal(dens, 0.0)
    return FermionHamiltonian(n_modes, np.zeros(n_modes), hop, dens)


def random_spinful_hamiltonian(n_sites: int, bound: float, seed) -> SpinfulHamiltonian:
    """Uniform spinful tables, sampled like :func:`random_hamiltonian`."""
    if bound < 0:
        raise DomainError("bound must be nonnegative")
    rng = np.random.default_rng(seed)

    def sym(n):
        mat = np.zeros((n, n))
        upper = np.triu_indices(n, k=1)
        mat[upper] = rng.uniform(-bound, bound, size=len(upper[0]))
        return mat + mat.T

    t_up = sym(n_sites)
    t_dn = sym(n_sites)
    v_on = rng.uniform(-bound, bound, size=n_sites)
    return SpinfulHamiltonian(n_sites, t_up, t_dn, v_on)
