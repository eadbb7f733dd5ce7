"""State-vector engine: Pauli-string rotations, Born-rule measurement,
and the measure-then-conditionally-flip reset primitive.

A StateVector is confined to one trajectory worker at a time; nothing in
here shares mutable state between instances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import PauliTerm

MAX_QUBITS = 26

# Probabilities this close to 0 or 1 are treated as deterministic and do
# not consume a random draw (keeps draw counts reproducible).
DETERMINISTIC_EPS = 1e-12


class RngStream:
    """Deterministic uniform stream; (seed, stream) fixes the sequence
    on every platform."""

    def __init__(self, seed: int, stream: int = 0):
        ss = np.random.SeedSequence(entropy=seed, spawn_key=(stream,))
        self._gen = np.random.Generator(np.random.PCG64(ss))
        self.seed = seed
        self.stream = stream

    def uniform(self) -> float:
        """One draw from U[0, 1)."""
        return float(self._gen.random())


@dataclass
class StateVector:
    """2^L complex amplitudes; bit q of the index is the occupation of
    qubit q."""

    L: int
    amps: np.ndarray

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amps) ** 2, dtype=np.longdouble)))

    def copy(self) -> "StateVector":
        return StateVector(self.L, self.amps.copy())


@dataclass(frozen=True)
class ResetEvent:
    """Outcome of one reset: which qubit, what was measured, what it was
    forced to, and whether the occupation actually changed."""

    q: int
    measured: int
    target: int
    changed: bool


def init_basis_state(L: int, occupations) -> StateVector:
    if not 1 <= L <= MAX_QUBITS:
        raise ValueError(f"register size must be in [1, {MAX_QUBITS}], got {L}")
    index = 0
    for q in occupations:
        if not 0 <= q < L:
            raise ValueError(f"occupation index {q} out of range for L={L}")
        index |= 1 << q
    amps = np.zeros(1 << L, dtype=complex)
    amps[index] = 1.0
    return StateVector(L, amps)


def pauli_action(letters: str):
    """Permutation/coefficient form of a unit Pauli string.

    Returns (perm, coef) such that (P psi)[k] = coef[k] * psi[perm[k]].
    """
    L = len(letters)
    mask_flip = 0
    mask_yz = 0
    n_y = 0
    for q, c in enumerate(letters):
        if c == "X":
            mask_flip |= 1 << q
        elif c == "Y":
            mask_flip |= 1 << q
            mask_yz |= 1 << q
            n_y += 1
        elif c == "Z":
            mask_yz |= 1 << q
    idx = np.arange(1 << L, dtype=np.uint32)
    perm = idx ^ np.uint32(mask_flip)
    parity = np.bitwise_count(perm & np.uint32(mask_yz)) & 1
    coef = (1j ** (n_y % 4)) * np.where(parity, -1.0, 1.0)
    return perm, coef.astype(complex)


def _rotate(amps: np.ndarray, theta: float, perm: np.ndarray, coef: np.ndarray) -> None:
    # exp(-i theta P) = cos(theta) I - i sin(theta) P since P^2 = I
    amps[:] = np.cos(theta) * amps - 1j * np.sin(theta) * (coef * amps[perm])


def apply_pauli_rotation(state: StateVector, term: PauliTerm, angle: float) -> StateVector:
    """Apply exp(-i * angle * P) in place, P the unit-coefficient string
    of `term` (its coefficient is ignored here; the caller folds it into
    the angle)."""
    if term.L != state.L:
        raise ValueError(f"term length {term.L} != register size {state.L}")
    perm, coef = pauli_action(term.letters)
    _rotate(state.amps, angle, perm, coef)
    return state


def expectation_number(state: StateVector, q: int) -> float:
    """<n_q> = sum of |amp|^2 over indices with bit q set.  Exact, no
    sampling."""
    if not 0 <= q < state.L:
        raise ValueError(f"qubit index {q} out of range")
    block = state.amps.reshape(-1, 2, 1 << q)
    return float(np.sum(np.abs(block[:, 1, :]) ** 2, dtype=np.longdouble))


def all_densities(state: StateVector) -> np.ndarray:
    """<n_q> for every qubit, as a length-L float array."""
    probs = np.abs(state.amps) ** 2
    out = np.empty(state.L)
    for q in range(state.L):
        out[q] = np.sum(probs.reshape(-1, 2, 1 << q)[:, 1, :], dtype=np.longdouble)
    return out


def flip_qubit(state: StateVector, q: int) -> StateVector:
    """Pauli-X on qubit q: swap amplitude pairs differing in bit q."""
    if not 0 <= q < state.L:
        raise ValueError(f"qubit index {q} out of range")
    block = state.amps.reshape(-1, 2, 1 << q)
    tmp = block[:, 0, :].copy()
    block[:, 0, :] = block[:, 1, :]
    block[:, 1, :] = tmp
    return state


def measure_qubit(state: StateVector, q: int, rng: RngStream) -> int:
    """Projective measurement of qubit q with collapse and
    renormalization.  Consumes exactly one draw unless the outcome is
    forced (p within DETERMINISTIC_EPS of 0 or 1)."""
    if not 0 <= q < state.L:
        raise ValueError(f"qubit index {q} out of range")
    block = state.amps.reshape(-1, 2, 1 << q)
    p1 = float(np.sum(np.abs(block[:, 1, :]) ** 2, dtype=np.longdouble))
    if p1 <= DETERMINISTIC_EPS:
        outcome = 0
    elif p1 >= 1.0 - DETERMINISTIC_EPS:
        outcome = 1
    else:
        outcome = 1 if rng.uniform() < p1 else 0
    block[:, 1 - outcome, :] = 0.0
    surviving = float(np.sum(np.abs(block[:, outcome, :]) ** 2, dtype=np.longdouble))
    block[:, outcome, :] /= np.sqrt(surviving)
    return outcome


def reset_to(state: StateVector, q: int, target: int, rng: RngStream) -> ResetEvent:
    """Measure qubit q and flip it if the outcome differs from `target`.

    Afterwards <n_q> is exactly `target`.  The `changed` flag records
    whether the occupation moved (an effective injection/removal rather
    than a null action)."""
    if target not in (0, 1):
        raise ValueError(f"target must be 0 or 1, got {target!r}")
    measured = measure_qubit(state, q, rng)
    changed = measured != target
    if changed:
        flip_qubit(state, q)
    return ResetEvent(q=q, measured=measured, target=target, changed=changed)
