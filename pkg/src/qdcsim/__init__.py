"""Simulator for single-excitation transfer in dual-channel quantum directional couplers."""
from .devices import (
    SCENARIO_NAMES,
    Scenario,
    ScenarioResult,
    build_hamiltonian,
    load_config,
    run_scenario,
    scenario_catalog,
    switching_sweep,
)
from .evolution import (
    EvolutionTrace,
    NotHermitianError,
    Propagator,
    QuantumState,
    diagonalize,
    evolve,
    trace,
    transfer_fidelity,
)
from .lattice import (
    DeviceConfig,
    ExcitationHamiltonian,
    SiteLabel,
    build_chain,
    build_coupler_qdc,
    build_grid_qdc,
    pst_coupling,
)
from .spin import (
    SpinKet,
    SpinModelConfig,
    SpinQuantum,
    build_am_separable,
    build_am_yy,
    spin_matrices,
    to_spin_index,
    wigner_amplitude,
)
