import numpy as np
import pytest

from daqc.errors import DomainError
from daqc.fermion import (
    FermionHamiltonian,
    ModeOrder,
    SpinfulHamiltonian,
    exact_evolution,
    jordan_wigner,
    jordan_wigner_spinful,
    random_hamiltonian,
)


# ---------------------------------------------------------------------------
# Independent occupation-basis oracle: second quantization done combinatorially
# on occupation bitstrings, with no Pauli algebra anywhere.
# ---------------------------------------------------------------------------

def occupation_oracle(h: FermionHamiltonian, order: ModeOrder) -> np.ndarray:
    n = h.n_modes
    pos = {order.perm[q]: q for q in range(n)}
    dim = 2 ** n

    def bits_of(idx):
        return [(idx >> (n - 1 - q)) & 1 for q in range(n)]

    def idx_of(bits):
        return sum(b << (n - 1 - q) for q, b in enumerate(bits))

    def annihilate(bits, mode):
        p = pos[mode]
        if bits[p] == 0:
            return None, 0
        sign = (-1) ** sum(bits[:p])
        out = bits.copy()
        out[p] = 0
        return out, sign

    def create(bits, mode):
        p = pos[mode]
        if bits[p] == 1:
            return None, 0
        sign = (-1) ** sum(bits[:p])
        out = bits.copy()
        out[p] = 1
        return out, sign

    mat = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bits = bits_of(col)
        for m in range(n):
            if bits[pos[m]]:
                mat[col, col] += h.onsite[m]
        for m in range(n):
            for k in range(n):
                if m == k:
                    continue
                b1, s1 = annihilate(bits, k)
                if b1 is not None:
                    b2, s2 = create(b1, m)
                    if b2 is not None:
                        mat[idx_of(b2), col] += h.hopping[m, k] * s1 * s2
                if bits[pos[m]] and bits[pos[k]]:
                    mat[col, col] += h.density[m, k]
    return mat


def spinful_occupation_oracle(h: SpinfulHamiltonian) -> np.ndarray:
    # species treated as two independent fermion registers on the interleaved
    # ladder layout: up on even qubits, down on odd qubits
    ns = h.n_sites
    n = 2 * ns
    dim = 2 ** n

    def bits_of(idx):
        return [(idx >> (n - 1 - q)) & 1 for q in range(n)]

    def idx_of(bits):
        return sum(b << (n - 1 - q) for q, b in enumerate(bits))

    def hop(bits, i, j, offset):
        # a+_i a_j within one species; string counts that species only
        pj, pi = 2 * j + offset, 2 * i + offset
        if bits[pj] == 0:
            return None, 0
        s1 = (-1) ** sum(bits[2 * k + offset] for k in range(j))
        mid = bits.copy()
        mid[pj] = 0
        if mid[pi] == 1:
            return None, 0
        s2 = (-1) ** sum(mid[2 * k + offset] for k in range(i))
        mid[pi] = 1
        return mid, s1 * s2

    mat = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bits = bits_of(col)
        for i in range(ns):
            for j in range(ns):
                if i == j:
                    continue
                for table, offset in ((h.hopping_up, 0), (h.hopping_down, 1)):
                    out = hop(bits, i, j, offset)
                    if out[0] is not None:
                        mat[idx_of(out[0]), col] += table[i, j] * out[1]
        for i in range(ns):
            if bits[2 * i] and bits[2 * i + 1]:
                mat[col, col] += h.onsite[i]
    return mat


def series_expm(mat: np.ndarray) -> np.ndarray:
    """Scaling-and-squaring Taylor exponential, independent of eigh."""
    norm = np.abs(mat).sum(axis=1).max()
    squarings = max(0, int(np.ceil(np.log2(max(norm, 1e-30)))) + 4)
    small = mat / (2 ** squarings)
    out = np.eye(mat.shape[0], dtype=complex)
    term = np.eye(mat.shape[0], dtype=complex)
    for k in range(1, 30):
        term = term @ small / k
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


class TestJordanWigner:
    def test_single_mode_number_operator(self):
        h = FermionHamiltonian(1, [1.0], np.zeros((1, 1)), np.zeros((1, 1)))
        assert np.allclose(jordan_wigner(h), np.diag([0.0, 1.0]))

    def test_two_mode_hopping(self):
        hop = np.array([[0.0, 1.0], [1.0, 0.0]])
        h = FermionHamiltonian(2, [0, 0], hop, np.zeros((2, 2)))
        mat = jordan_wigner(h)
        want = np.zeros((4, 4))
        want[1, 2] = want[2, 1] = 1.0  # |01> <-> |10>
        assert np.allclose(mat, want)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_matches_occupation_oracle(self, seed):
        rng = np.random.default_rng(seed)
        n = 4
        h = random_hamiltonian(n, 1.0, seed=seed)
        h.onsite = rng.uniform(-1, 1, n)
        order = ModeOrder(tuple(rng.permutation(n)))
        assert np.abs(jordan_wigner(h, order) - occupation_oracle(h, order)).max() < 1e-14

    def test_swapped_orders_related_by_fermionic_swap(self):
        # conjugation oracle: adjacent position swap = embedded F(0, pi)
        from daqc.circuits import fsg_matrix_raw
        from daqc.qcore import apply_2q

        n = 4
        h = random_hamiltonian(n, 1.0, seed=9)
        order1 = ModeOrder((2, 0, 3, 1))
        order2 = ModeOrder((2, 3, 0, 1))  # positions 1 and 2 swapped
        fswap = fsg_matrix_raw(0.0, np.pi)
        swap_full = apply_2q(np.eye(2 ** n, dtype=complex), n, 1, 2, fswap)
        m1 = jordan_wigner(h, order1)
        m2 = jordan_wigner(h, order2)
        assert np.abs(m2 - swap_full @ m1 @ swap_full.conj().T).max() < 1e-12

    def test_trace_matches_occupation_combinatorics(self):
        # brute force over occupation states: tr H = sum over bitstrings of
        # the diagonal (number and density terms only)
        h = random_hamiltonian(4, 1.0, seed=13)
        h.onsite = np.array([0.3, -0.2, 0.5, 0.1])
        trace = 0.0
        for idx in range(2 ** 4):
            occ = [(idx >> (3 - q)) & 1 for q in range(4)]
            trace += sum(h.onsite[m] * occ[m] for m in range(4))
            trace += sum(
                h.density[m, k] * occ[m] * occ[k]
                for m in range(4)
                for k in range(4)
                if m != k
            )
        assert np.trace(jordan_wigner(h)).real == pytest.approx(trace, abs=1e-10)

    def test_hermitian(self):
        h = random_hamiltonian(5, 1.0, seed=17)
        mat = jordan_wigner(h)
        assert np.abs(mat - mat.conj().T).max() < 1e-13

    def test_complex_hopping_rejected(self):
        hop = np.array([[0.0, 1.0], [-1.0, 0.0]])
        with pytest.raises(DomainError):
            FermionHamiltonian(2, [0, 0], hop, np.zeros((2, 2)))


class TestExactEvolution:
    def test_zero_time_is_identity(self):
        h = np.diag([1.0, -1.0])
        assert np.allclose(exact_evolution(h, 0.0), np.eye(2))

    def test_pauli_z_phase(self):
        u = exact_evolution(np.diag([1.0, -1.0]), np.pi / 2)
        want = np.diag([np.exp(-1j * np.pi / 2), np.exp(1j * np.pi / 2)])
        assert np.allclose(u, want, atol=1e-12)

    def test_matches_series_expansion_oracle(self):
        rng = np.random.default_rng(23)
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        h = (a + a.conj().T) / 2
        dt = 0.7
        assert np.abs(exact_evolution(h, dt) - series_expm(-1j * h * dt)).max() < 1e-9

    def test_non_hermitian_rejected(self):
        with pytest.raises(DomainError):
            exact_evolution(np.array([[0.0, 1.0], [0.0, 0.0]]), 0.1)

    def test_preserves_particle_number_blocks(self):
        h = random_hamiltonian(4, 1.0, seed=31)  # T and V conserve N
        u = exact_evolution(jordan_wigner(h), 0.8)
        for row in range(16):
            for col in range(16):
                if bin(row).count("1") != bin(col).count("1"):
                    assert abs(u[row, col]) < 1e-10

    def test_two_modes_match_occupation_basis_evolution(self):
        h = random_hamiltonian(2, 1.0, seed=37)
        order = ModeOrder.identity(2)
        u_jw = exact_evolution(jordan_wigner(h, order), 0.5)
        u_occ = exact_evolution(occupation_oracle(h, order), 0.5)
        assert np.abs(u_jw - u_occ).max() < 1e-12


class TestSpinfulJW:
    def test_matches_spinful_occupation_oracle(self):
        from daqc.fermion import random_spinful_hamiltonian

        h = random_spinful_hamiltonian(3, 1.0, seed=41)
        assert np.abs(jordan_wigner_spinful(h) - spinful_occupation_oracle(h)).max() < 1e-14

    def test_onsite_term_is_diagonal_rung_product(self):
        h = SpinfulHamiltonian(1, np.zeros((1, 1)), np.zeros((1, 1)), [2.0])
        assert np.allclose(jordan_wigner_spinful(h), np.diag([0.0, 0.0, 0.0, 2.0]))


class TestRandomHamiltonian:
    def test_zero_bound_gives_zero_hamiltonian(self):
        h = random_hamiltonian(3, 0.0, seed=1)
        assert not h.hopping.any() and not h.density.any() and not h.onsite.any()

    def test_entries_within_bound(self):
        h = random_hamiltonian(6, 0.25, seed=2)
        assert np.abs(h.hopping).max() <= 0.25
        assert np.abs(h.density).max() <= 0.25

    def test_deterministic(self):
        a = random_hamiltonian(4, 0.1, seed=77)
        b = random_hamiltonian(4, 0.1, seed=77)
        assert np.array_equal(a.hopping, b.hopping)
        assert np.array_equal(a.density, b.density)

    def test_onsite_zero(self):
        assert not random_hamiltonian(4, 0.1, seed=5).onsite.any()
