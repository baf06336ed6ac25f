"""daqc: compiler and verifying simulator for digital-analog quantum computation.

Layers of simultaneous two-qubit gates are compiled into refocusing
schedules over always-on Ising ZZ coupling (arbitrary connectivity,
non-uniform coupling constants), fermionic-SWAP-network Trotter circuits are
built for spinless and spin-1/2 Hamiltonians, and errors are quantified via
closed-form and density-matrix noise simulation.
"""

from .errors import ConfigError, DomainError, ResourceLimitError
from .topology import (
    CouplingGraph,
    EntityPartition,
    assign_sequences,
    chain,
    complete,
    deform_graph,
    grid,
    grid_dims,
    hadamard_matrix,
    ladder,
    required_sequences,
)
from .qcore import (
    QuantumState,
    haar_random_state,
    phase_aligned_distance,
    process_fidelity,
    state_fidelity,
    unitary_distance_up_to_phase,
    zz_evolution,
)
from .fermion import (
    FermionHamiltonian,
    ModeOrder,
    SpinfulHamiltonian,
    exact_evolution,
    jordan_wigner,
    jordan_wigner_spinful,
    random_hamiltonian,
    random_spinful_hamiltonian,
)
from .refocus import (
    CompileTarget,
    RefocusSchedule,
    Segment,
    compile_spread,
    compile_uniform,
    effective_coupling,
    entangler_count,
    schedule_to_circuit,
    verify_schedule,
)
from .network import (
    Circuit,
    FsgParams,
    circuit_unitary,
    decompose_fsg,
    fsg_matrix,
    parse_circuit,
    serialize_circuit,
    simulate_circuit,
    synthesize_cnot,
    synthesize_cphase,
    trotter_step_spinful,
    trotter_step_spinless,
)
from .noise import (
    NoiseModel,
    SweepConfig,
    apply_amplitude_damping,
    apply_depolarizing,
    apply_phase_damping,
    cnot_infidelity_curve,
    perturb_couplings,
    trotter_fidelity_sweep,
)

__version__ = "0.1.0"
