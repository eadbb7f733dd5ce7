"""First-order Trotter step for a Pauli-sum Hamiltonian, plus an exact
dense propagator used as an independent oracle."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import MAX_DENSE_QUBITS, PauliHamiltonian, PauliTerm
from .state import StateVector, _rotate, pauli_action


@dataclass(frozen=True)
class TrotterPlan:
    """One application of prod_s exp(-i theta_s P_s) with theta_s =
    coeff_s * dt, in the Hamiltonian's deterministic term order.
    Identity strings are dropped (global phase only)."""

    L: int
    dt: float
    rotations: tuple[tuple[PauliTerm, float], ...]
    # accumulated angle of the identity (constant) strings; applied as a
    # global phase so (step)^N matches exp(-i H t) including phase,
    # which the dense-oracle checks rely on
    identity_angle: float = 0.0
    # precomputed (perm, coef, theta) per rotation, shared read-only
    # across trajectory workers
    _kernels: tuple = field(default=(), repr=False, compare=False)


def build_step(h: PauliHamiltonian, dt: float) -> TrotterPlan:
    if not (dt > 0.0 and np.isfinite(dt)):
        raise ValueError(f"dt must be positive and finite, got {dt!r}")
    rotations = tuple(
        (term, term.coeff * dt) for term in h.terms if not term.is_identity
    )
    identity_angle = sum(t.coeff * dt for t in h.terms if t.is_identity)
    kernels = tuple(
        (*pauli_action(term.letters), theta) for term, theta in rotations
    )
    return TrotterPlan(
        L=h.L, dt=dt, rotations=rotations,
        identity_angle=identity_angle, _kernels=kernels,
    )


def apply_step(state: StateVector, plan: TrotterPlan) -> StateVector:
    """Apply the Trotter step in place."""
    if plan.L != state.L:
        raise ValueError(f"plan size {plan.L} != register size {state.L}")
    amps = state.amps
    for perm, coef, theta in plan._kernels:
        _rotate(amps, theta, perm, coef)
    if plan.identity_angle != 0.0:
        amps *= np.exp(-1j * plan.identity_angle)
    return state


def exact_propagator_oracle(h: PauliHamiltonian, t: float) -> np.ndarray:
    """exp(-i H t) by Hermitian eigendecomposition of the dense matrix.
    Verification oracle only; independent of the rotation kernel."""
    if h.L > MAX_DENSE_QUBITS:
        raise ValueError(f"dense propagator limited to L <= {MAX_DENSE_QUBITS}")
    H = h.to_matrix()
    w, V = np.linalg.eigh(H)
    return (V * np.exp(-1j * w * t)) @ V.conj().T
