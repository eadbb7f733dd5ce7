"""Spinless-fermion chain Hamiltonian and its qubit (Pauli-string) form.

Conventions used everywhere in this package:

* qubit q holds the occupation of chain site q+1 (sites are 1-based in
  configs and output, qubits 0-based internally),
* computational basis index j has bit q set iff qubit q is occupied,
  i.e. ``|1>`` means occupied and ``n = (I - Z)/2`` with ``Z|1> = -|1>``,
* dense operators act on amplitude vectors indexed that way (the last
  Kronecker factor acts on bit 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}

# Dense Fock-space construction is a verification tool only; keep it small.
MAX_DENSE_QUBITS = 12


@dataclass(frozen=True)
class ChainSpec:
    """Open-boundary chain of spinless fermions.

    L sites with nearest-neighbour hopping `gamma` and density-density
    interaction `v`, both in meV.
    """

    L: int
    gamma: float
    v: float = 0.0

    def __post_init__(self) -> None:
        if not isinstance(self.L, int) or self.L < 1:
            raise ValueError(f"chain length must be an integer >= 1, got {self.L!r}")
        if not (math.isfinite(self.gamma) and math.isfinite(self.v)):
            raise ValueError("gamma and v must be finite")


@dataclass(frozen=True)
class PauliTerm:
    """One real-coefficient Pauli string, e.g. 0.5 * XXI."""

    coeff: float
    letters: str

    def __post_init__(self) -> None:
        if not math.isfinite(self.coeff):
            raise ValueError("coefficient must be finite")
        if not self.letters or any(c not in "IXYZ" for c in self.letters):
            raise ValueError(f"invalid Pauli letters {self.letters!r}")

    @property
    def L(self) -> int:
        return len(self.letters)

    @property
    def is_identity(self) -> bool:
        return set(self.letters) == {"I"}

    def to_matrix(self) -> np.ndarray:
        # letters[q] acts on bit q, so bit 0 is the last Kronecker factor
        mats = [PAULI_1Q[c] for c in reversed(self.letters)]
        return self.coeff * reduce(np.kron, mats)


@dataclass(frozen=True)
class PauliHamiltonian:
    """Ordered sum of Pauli terms on an L-qubit register."""

    L: int
    terms: tuple[PauliTerm, ...]

    def __post_init__(self) -> None:
        seen = set()
        for t in self.terms:
            if t.L != self.L:
                raise ValueError("all terms must have the register length")
            if t.letters in seen:
                raise ValueError(f"duplicate Pauli string {t.letters}")
            seen.add(t.letters)

    def to_matrix(self) -> np.ndarray:
        dim = 1 << self.L
        H = np.zeros((dim, dim), dtype=complex)
        for t in self.terms:
            H += t.to_matrix()
        return H

    def __add__(self, other: "PauliHamiltonian") -> "PauliHamiltonian":
        if other.L != self.L:
            raise ValueError("register size mismatch")
        merged: dict[str, float] = {}
        for t in self.terms + other.terms:
            merged[t.letters] = merged.get(t.letters, 0.0) + t.coeff
        return PauliHamiltonian(
            self.L, tuple(PauliTerm(c, s) for s, c in merged.items())
        )


class _TermAccumulator:
    """Order-preserving merge of Pauli strings."""

    def __init__(self, L: int):
        self.L = L
        self._coeffs: dict[str, float] = {}

    def add(self, coeff: float, positions: dict[int, str]) -> None:
        letters = ["I"] * self.L
        for q, p in positions.items():
            letters[q] = p
        key = "".join(letters)
        self._coeffs[key] = self._coeffs.get(key, 0.0) + coeff

    def build(self) -> PauliHamiltonian:
        terms = tuple(PauliTerm(c, s) for s, c in self._coeffs.items())
        return PauliHamiltonian(self.L, terms)


def build_chain_hamiltonian(spec: ChainSpec) -> PauliHamiltonian:
    """Jordan-Wigner image of the chain Hamiltonian.

    Hopping on bond (q, q+1) maps to (gamma/2)(X_q X_{q+1} + Y_q Y_{q+1});
    the interaction n_q n_{q+1} maps to (v/4)(I - Z_q)(I - Z_{q+1})
    expanded into Pauli strings.  Constant (all-identity) terms are kept
    so the spectrum matches the Fock-space oracle exactly.  Term order is
    deterministic: hopping bonds ascending (XX before YY), then the
    interaction strings in first-appearance order.
    """
    acc = _TermAccumulator(spec.L)
    if spec.gamma != 0.0:
        for b in range(spec.L - 1):
            acc.add(spec.gamma / 2.0, {b: "X", b + 1: "X"})
            acc.add(spec.gamma / 2.0, {b: "Y", b + 1: "Y"})
    if spec.v != 0.0:
        for b in range(spec.L - 1):
            acc.add(spec.v / 4.0, {})
            acc.add(-spec.v / 4.0, {b: "Z"})
            acc.add(-spec.v / 4.0, {b + 1: "Z"})
            acc.add(spec.v / 4.0, {b: "Z", b + 1: "Z"})
    return acc.build()


def number_operator(q: int, L: int) -> PauliHamiltonian:
    """Site occupation n_q = (I - Z_q)/2 as a Pauli sum."""
    if not 0 <= q < L:
        raise ValueError(f"qubit index {q} out of range for L={L}")
    acc = _TermAccumulator(L)
    acc.add(0.5, {})
    acc.add(-0.5, {q: "Z"})
    return acc.build()


def total_number_operator(L: int) -> PauliHamiltonian:
    out = number_operator(0, L)
    for q in range(1, L):
        out = out + number_operator(q, L)
    return out


def _check_dense_size(L: int) -> None:
    if L > MAX_DENSE_QUBITS:
        raise ValueError(f"dense construction limited to L <= {MAX_DENSE_QUBITS}, got {L}")


def fermion_lowering(q: int, L: int) -> np.ndarray:
    """Dense annihilation operator c_q with the Jordan-Wigner sign string.

    The string runs over qubits p < q (the lower-significance bits), so
    these matrices anticommute correctly and match the basis ordering of
    the state engine.
    """
    if not 0 <= q < L:
        raise ValueError(f"qubit index {q} out of range for L={L}")
    _check_dense_size(L)
    lower = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |0><1|
    ops = [PAULI_1Q["Z"]] * q + [lower] + [PAULI_1Q["I"]] * (L - q - 1)
    return reduce(np.kron, reversed(ops))


def fock_matrix_oracle(spec: ChainSpec) -> np.ndarray:
    """Chain Hamiltonian built directly from fermionic matrices.

    Independent of the Pauli-string path; used to pin down the
    Jordan-Wigner conventions.  Hermitian by construction.
    """
    _check_dense_size(spec.L)
    dim = 1 << spec.L
    c = [fermion_lowering(q, spec.L) for q in range(spec.L)]
    cdag = [m.conj().T for m in c]
    n = [cdag[q] @ c[q] for q in range(spec.L)]
    H = np.zeros((dim, dim), dtype=complex)
    for b in range(spec.L - 1):
        H += spec.gamma * (cdag[b] @ c[b + 1] + cdag[b + 1] @ c[b])
        H += spec.v * (n[b] @ n[b + 1])
    return H
