import numpy as np
import pytest

from daqc.errors import DomainError
from daqc.noise import (
    NoiseModel,
    SweepConfig,
    apply_amplitude_damping,
    apply_depolarizing,
    apply_phase_damping,
    cnot_infidelity_curve,
    kraus_operators,
    perturb_couplings,
    trotter_fidelity_sweep,
)
from daqc.qcore import PAULI_X, PAULI_Y, PAULI_Z
from daqc.topology import chain


def random_density(rng, n_qubits):
    dim = 2 ** n_qubits
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def kron(*ops):
    out = ops[0]
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


class TestDepolarizing:
    def test_zero_probability_is_identity(self):
        rng = np.random.default_rng(0)
        rho = random_density(rng, 2)
        assert np.abs(apply_depolarizing(rho, 1, 0.0) - rho).max() < 1e-15

    def test_three_quarters_fully_mixes(self):
        rng = np.random.default_rng(1)
        rho = random_density(rng, 1)
        out = apply_depolarizing(rho, 0, 0.75)
        assert np.abs(out - np.eye(2) / 2).max() < 1e-12

    def test_matches_explicit_kraus_sum(self):
        # oracle: full-size Kraus matrices built with kron
        rng = np.random.default_rng(2)
        rho = random_density(rng, 2)
        p = 0.3
        eye = np.eye(2, dtype=complex)
        want = (1 - p) * rho
        for pauli in (PAULI_X, PAULI_Y, PAULI_Z):
            full = kron(eye, pauli)  # qubit 1
            want += (p / 3) * full @ rho @ full.conj().T
        got = apply_depolarizing(rho, 1, p)
        assert np.abs(got - want).max() < 1e-14

    def test_out_of_range_rejected(self):
        with pytest.raises(DomainError):
            apply_depolarizing(np.eye(2) / 2, 0, 1.5)


class TestAmplitudeDamping:
    def test_zero_gamma_identity(self):
        rng = np.random.default_rng(3)
        rho = random_density(rng, 1)
        assert np.abs(apply_amplitude_damping(rho, 0, 0.0) - rho).max() < 1e-15

    def test_full_damping_resets_qubit(self):
        rng = np.random.default_rng(4)
        rho = random_density(rng, 1)
        out = apply_amplitude_damping(rho, 0, 1.0)
        assert np.abs(out - np.diag([1.0, 0.0])).max() < 1e-12

    def test_excited_population_decays(self):
        rho = np.diag([0.0, 1.0]).astype(complex)
        out = apply_amplitude_damping(rho, 0, 0.3)
        assert np.allclose(np.diag(out).real, [0.3, 0.7], atol=1e-14)


class TestPhaseDamping:
    def test_zero_lambda_identity(self):
        rng = np.random.default_rng(5)
        rho = random_density(rng, 1)
        assert np.abs(apply_phase_damping(rho, 0, 0.0) - rho).max() < 1e-15

    def test_full_dephasing_kills_coherences(self):
        plus = np.full((2, 2), 0.5, dtype=complex)
        out = apply_phase_damping(plus, 0, 1.0)
        assert abs(out[0, 1]) < 1e-15 and abs(out[1, 0]) < 1e-15
        assert np.allclose(np.diag(out).real, [0.5, 0.5])

    def test_coherence_scaling(self):
        plus = np.full((2, 2), 0.5, dtype=complex)
        out = apply_phase_damping(plus, 0, 0.5)
        assert abs(out[0, 1]) == pytest.approx(0.5 * np.sqrt(0.5), abs=1e-14)
        # populations untouched
        assert np.allclose(np.diag(out).real, [0.5, 0.5], atol=1e-14)


class TestChannelProperties:
    @pytest.mark.parametrize("kind", ["depolarizing", "amplitude", "phase"])
    @pytest.mark.parametrize("param", [0.1, 0.6])
    def test_trace_preserving_and_positive(self, kind, param):
        rng = np.random.default_rng(hash((kind, param)) % 2 ** 32)
        apply = {
            "depolarizing": apply_depolarizing,
            "amplitude": apply_amplitude_damping,
            "phase": apply_phase_damping,
        }[kind]
        for _ in range(25):
            rho = random_density(rng, 2)
            out = apply(rho, int(rng.integers(2)), param)
            assert abs(np.trace(out) - 1.0) < 1e-12
            assert np.linalg.eigvalsh(out).min() > -1e-10

    def test_kraus_completeness(self):
        for kind in ("depolarizing", "amplitude", "phase"):
            for param in (0.0, 0.37, 1.0):
                total = sum(k.conj().T @ k for k in kraus_operators(kind, param))
                assert np.abs(total - np.eye(2)).max() < 1e-14

    def test_channels_on_different_qubits_commute(self):
        rng = np.random.default_rng(9)
        rho = random_density(rng, 2)
        ab = apply_amplitude_damping(apply_depolarizing(rho, 0, 0.2), 1, 0.4)
        ba = apply_depolarizing(apply_amplitude_damping(rho, 1, 0.4), 0, 0.2)
        assert np.abs(ab - ba).max() < 1e-14


class TestPerturbCouplings:
    def test_zero_omega_unchanged(self):
        g = chain(4)
        out, pert = perturb_couplings(g, 0.0, seed=1)
        assert out.couplings == {e: float(g.couplings[e]) for e in g.edges}
        assert pert.bound == 0.0

    def test_deviations_within_bound(self):
        g = chain(6)
        out, pert = perturb_couplings(g, 0.3, seed=2)
        assert all(abs(d) <= 0.3 for d in pert.deviations.values())

    def test_deterministic(self):
        g = chain(5)
        a, _ = perturb_couplings(g, 0.2, seed=3)
        b, _ = perturb_couplings(g, 0.2, seed=3)
        assert a.couplings == b.couplings

    def test_negated_omega_mirrors_deviations(self):
        g = chain(5)
        _, plus = perturb_couplings(g, 0.2, seed=4)
        _, minus = perturb_couplings(g, -0.2, seed=4)
        for e in g.edges:
            assert minus.deviations[e] == pytest.approx(-plus.deviations[e], abs=0)

    def test_too_large_omega_rejected(self):
        with pytest.raises(DomainError):
            perturb_couplings(chain(3), 1.0, seed=5)


class TestCnotInfidelityCurve:
    def test_named_points(self):
        pts = dict(cnot_infidelity_curve([0.0, 0.5, 1.0]))
        assert pts[0.0] == pytest.approx(1.0, abs=1e-12)
        assert pts[1.0] == pytest.approx(0.5, abs=1e-12)
        assert pts[0.5] == pytest.approx(np.cos(np.pi / 8) ** 2, abs=1e-12)

    def test_matches_closed_form_everywhere(self):
        ratios = np.linspace(0.0, 1.0, 21)
        for r, f in cnot_infidelity_curve(ratios):
            assert f == pytest.approx(np.cos(np.pi / 4 * r) ** 2, abs=1e-10)


class TestSweeps:
    def test_omega_zero_gives_unit_fidelity(self):
        cfg = SweepConfig(4, "omega", [0.0], n_states=3, seed=11)
        res = trotter_fidelity_sweep(cfg)
        assert res.rows[0].mean_fidelity == pytest.approx(1.0, abs=1e-10)

    def test_noise_zero_gives_unit_fidelity(self):
        cfg = SweepConfig(4, "depolarizing", [0.0], backend="da", n_states=2, seed=12)
        res = trotter_fidelity_sweep(cfg)
        assert res.rows[0].mean_fidelity == pytest.approx(1.0, abs=1e-10)

    def test_deterministic(self):
        cfg = SweepConfig(4, "omega", [0.0, 0.05], n_states=3, seed=13)
        a = trotter_fidelity_sweep(cfg)
        b = trotter_fidelity_sweep(cfg)
        assert [(r.parameter, r.mean_fidelity) for r in a.rows] == [
            (r.parameter, r.mean_fidelity) for r in b.rows
        ]

    def test_omega_grid_points_share_one_disorder_realization(self):
        # grid points reuse the same unit deviations, so a value computed
        # alone and inside a larger grid must agree bit for bit; negated grid
        # values select the mirrored realization of the same draw
        alone = trotter_fidelity_sweep(SweepConfig(4, "omega", [0.08], n_states=3, seed=14))
        combined = trotter_fidelity_sweep(
            SweepConfig(4, "omega", [-0.08, 0.08], n_states=3, seed=14)
        )
        assert combined.rows[1].mean_fidelity == alone.rows[0].mean_fidelity
        assert combined.rows[0].parameter == -0.08

    def test_omega_needs_da_backend(self):
        with pytest.raises(DomainError):
            SweepConfig(4, "omega", [0.1], backend="digital")

    def test_csv_format(self):
        cfg = SweepConfig(4, "phase", [0.0, 0.001], backend="digital", n_states=2, seed=15)
        text = trotter_fidelity_sweep(cfg).to_csv()
        lines = text.strip().splitlines()
        assert lines[0] == "param,mean_fidelity,stderr,n_states,seed"
        assert len(lines) == 3
        assert lines[1].endswith(",2,15")

    def test_depolarizing_da_vs_digital_slope_ratio_near_two(self):
        grid = [0.0, 0.0005, 0.001]
        slopes = {}
        for backend in ("da", "digital"):
            cfg = SweepConfig(4, "depolarizing", grid, backend=backend, n_states=4, seed=16)
            rows = trotter_fidelity_sweep(cfg).rows
            x = np.array([r.parameter for r in rows])
            y = 1.0 - np.array([r.mean_fidelity for r in rows])
            slopes[backend] = np.polyfit(x, y, 1)[0]
        ratio = slopes["da"] / slopes["digital"]
        assert 1.5 < ratio < 2.5

    def test_density_sweep_size_capped(self):
        from daqc.errors import ResourceLimitError

        with pytest.raises(ResourceLimitError):
            SweepConfig(10, "depolarizing", [0.001])
        SweepConfig(10, "omega", [0.0])  # statevector sweeps allow up to 12

    def test_noise_model_validation(self):
        with pytest.raises(DomainError):
            NoiseModel("depolarizing", 1.2)
        with pytest.raises(DomainError):
            NoiseModel("thermal", 0.1)
