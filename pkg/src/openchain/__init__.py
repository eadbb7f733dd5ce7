"""Stochastic measure-and-reset trajectory simulator for an open
spinless-fermion chain, with an independent Lindblad oracle."""

from .model import (
    ChainSpec,
    PauliHamiltonian,
    PauliTerm,
    build_chain_hamiltonian,
    fock_matrix_oracle,
    number_operator,
)
from .state import (
    RngStream,
    StateVector,
    apply_pauli_rotation,
    expectation_number,
    flip_qubit,
    init_basis_state,
    measure_qubit,
    reset_to,
)
from .trajectory import (
    ContactSpec,
    EnsembleResult,
    RunConfig,
    fermi_dirac,
    run_ensemble,
    run_trajectory,
    step_probabilities,
)
from .trotter import TrotterPlan, apply_step, build_step, exact_propagator_oracle

__all__ = [
    "ChainSpec",
    "PauliHamiltonian",
    "PauliTerm",
    "build_chain_hamiltonian",
    "fock_matrix_oracle",
    "number_operator",
    "RngStream",
    "StateVector",
    "apply_pauli_rotation",
    "expectation_number",
    "flip_qubit",
    "init_basis_state",
    "measure_qubit",
    "reset_to",
    "ContactSpec",
    "EnsembleResult",
    "RunConfig",
    "fermi_dirac",
    "run_ensemble",
    "run_trajectory",
    "step_probabilities",
    "TrotterPlan",
    "apply_step",
    "build_step",
    "exact_propagator_oracle",
]

__version__ = "0.1.0"
