"""Exact state-vector simulation.

Amplitudes are little-endian: qubit 0 is the least-significant bit of the basis
index, so ``|q1 q0⟩ = |11⟩`` is index 3. Public operations return new immutable
``StateVector`` objects; the ``*_inplace`` kernels mutate a private buffer and are
what ``ansatz.evaluate`` and the adjoint sweep use.
"""

from __future__ import annotations

import functools
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np

from vqtransfer.errors import (
    ConsistencyError,
    InvalidPairError,
    InvalidSizeError,
    QubitIndexError,
    QubitMismatchError,
)
from vqtransfer.pauli import CACHE_MAX_QUBITS, PauliSum, PauliTerm, pauli_action

MAX_QUBITS = 24
NORM_TOLERANCE = 1e-10
IMAGINARY_TOLERANCE = 1e-10

RotationAxis = Literal["X", "Z"]


@dataclass(frozen=True, eq=False)
class StateVector:
    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        _check_size(self.num_qubits)
        amplitudes = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amplitudes.shape[0] != 1 << self.num_qubits:
            raise InvalidSizeError(
                f"{amplitudes.shape[0]} amplitudes do not match {self.num_qubits} qubits"
            )
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex] | np.ndarray) -> StateVector:
        array = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        dim = array.shape[0]
        if dim < 2 or dim & (dim - 1):
            raise InvalidSizeError(f"state length must be a power of two >= 2, got {dim}")
        norm = float(np.vdot(array, array).real)
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise InvalidSizeError(f"state is not normalized: squared norm {norm}")
        return cls(dim.bit_length() - 1, array)

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def copy_buffer(self) -> np.ndarray:
        return self.amplitudes.copy()


def _check_size(n: int) -> None:
    if not 1 <= n <= MAX_QUBITS:
        raise InvalidSizeError(f"qubit count must be in [1, {MAX_QUBITS}], got {n}")


def _check_qubit(qubit: int, n: int) -> None:
    if not 0 <= qubit < n:
        raise QubitIndexError(f"qubit {qubit} out of range for {n} qubits")


def _check_same_size(a: int, b: int) -> None:
    if a != b:
        raise QubitMismatchError(f"qubit counts differ: {a} vs {b}")


def init_zero(n: int) -> StateVector:
    _check_size(n)
    amplitudes = np.zeros(1 << n, dtype=np.complex128)
    amplitudes[0] = 1.0
    return StateVector(n, amplitudes)


def tensor_product(states: Sequence[StateVector]) -> StateVector:
    """``|s_0⟩ ⊗ |s_1⟩ ⊗ …`` with ``s_0`` on the lowest-indexed qubits."""
    if not states:
        raise InvalidSizeError("tensor product of zero states")
    amplitudes = states[0].amplitudes
    n = states[0].num_qubits
    for state in states[1:]:
        amplitudes = np.kron(state.amplitudes, amplitudes)
        n += state.num_qubits
    return StateVector(n, amplitudes)


# -- in-place kernels ---------------------------------------------------------


def _split(psi: np.ndarray, n: int, qubit: int) -> np.ndarray:
    return psi.reshape(1 << (n - qubit - 1), 2, 1 << qubit)


def rotate_inplace(psi: np.ndarray, n: int, axis: str, qubit: int, angle: float) -> None:
    view = _split(psi, n, qubit)
    c = np.cos(angle / 2)
    s = np.sin(angle / 2)
    if axis == "Z":
        view[:, 0, :] *= complex(c, -s)
        view[:, 1, :] *= complex(c, s)
    elif axis == "X":
        a0 = view[:, 0, :].copy()
        a1 = view[:, 1, :]
        view[:, 0, :] = c * a0 - 1j * s * a1
        view[:, 1, :] = -1j * s * a0 + c * a1
    else:
        raise ValueError(f"unsupported rotation axis {axis!r}")


def _cz_mask(n: int, a: int, b: int) -> np.ndarray:
    if n > CACHE_MAX_QUBITS:
        return _build_cz_mask(n, a, b)
    return _cached_cz_mask(n, a, b)


@functools.lru_cache(maxsize=1024)
def _cached_cz_mask(n: int, a: int, b: int) -> np.ndarray:
    return _build_cz_mask(n, a, b)


def _build_cz_mask(n: int, a: int, b: int) -> np.ndarray:
    index = np.arange(1 << n, dtype=np.int64)
    mask = ((index >> a) & 1 & (index >> b)).astype(bool)
    mask.setflags(write=False)
    return mask


def cz_inplace(psi: np.ndarray, n: int, control: int, target: int) -> None:
    psi[_cz_mask(n, min(control, target), max(control, target))] *= -1.0


def pauli_apply(psi: np.ndarray, n: int, term: PauliTerm) -> np.ndarray:
    """Return ``P ψ`` for the bare Pauli string of ``term`` (coefficient ignored)."""
    if term.is_identity:
        return psi.copy()
    perm, phase = pauli_action(term.factors, n)
    return phase * psi[perm]


def pauli_exp_inplace(psi: np.ndarray, n: int, term: PauliTerm, angle: float) -> None:
    # exp(-i φ P) = cos φ I - i sin φ P for any Pauli string P (P² = I)
    phi = angle * term.coefficient
    if term.is_identity:
        psi *= np.exp(-1j * phi)
        return
    rotated = pauli_apply(psi, n, term)
    psi *= np.cos(phi)
    psi += (-1j * np.sin(phi)) * rotated


def hamiltonian_apply(psi: np.ndarray, n: int, h: PauliSum) -> np.ndarray:
    out = np.zeros_like(psi)
    for term in h:
        if term.is_identity:
            out += term.coefficient * psi
        else:
            perm, phase = pauli_action(term.factors, n)
            out += term.coefficient * (phase * psi[perm])
    return out


# -- public operations --------------------------------------------------------


def apply_rotation(s: StateVector, axis: RotationAxis, qubit: int, angle: float) -> StateVector:
    """Apply ``exp(-i·angle·P/2)`` with ``P ∈ {X, Z}`` on ``qubit``."""
    _check_qubit(qubit, s.num_qubits)
    if axis not in ("X", "Z"):
        raise ValueError(f"rotation axis must be 'X' or 'Z', got {axis!r}")
    psi = s.copy_buffer()
    rotate_inplace(psi, s.num_qubits, axis, qubit, float(angle))
    return StateVector(s.num_qubits, psi)


def apply_cz(s: StateVector, control: int, target: int) -> StateVector:
    if control == target:
        raise InvalidPairError(f"CZ needs two distinct qubits, got {control} twice")
    _check_qubit(control, s.num_qubits)
    _check_qubit(target, s.num_qubits)
    psi = s.copy_buffer()
    cz_inplace(psi, s.num_qubits, control, target)
    return StateVector(s.num_qubits, psi)


def apply_pauli_exp(s: StateVector, term: PauliTerm, angle: float) -> StateVector:
    """Apply ``exp(-i·angle·c·P)`` for ``term = c·P``."""
    if term.max_qubit >= s.num_qubits:
        raise QubitIndexError(f"term {term} acts outside {s.num_qubits} qubits")
    psi = s.copy_buffer()
    pauli_exp_inplace(psi, s.num_qubits, term, float(angle))
    return StateVector(s.num_qubits, psi)


def apply_hamiltonian(s: StateVector, h: PauliSum) -> np.ndarray:
    """Raw vector ``H|s⟩``; not normalized, so returned as an array."""
    _check_same_size(s.num_qubits, h.num_qubits)
    return hamiltonian_apply(s.amplitudes, s.num_qubits, h)


def real_part(value: complex) -> float:
    if abs(value.imag) >= IMAGINARY_TOLERANCE:
        raise ConsistencyError(f"expectation has imaginary residue {value.imag:.3e}")
    return float(value.real)


def expectation_buffer(psi: np.ndarray, n: int, h: PauliSum) -> float:
    return real_part(complex(np.vdot(psi, hamiltonian_apply(psi, n, h))))


def expectation(s: StateVector, h: PauliSum) -> float:
    """``⟨s|H|s⟩``; an imaginary residue of 1e-10 or more is a consistency error."""
    _check_same_size(s.num_qubits, h.num_qubits)
    return expectation_buffer(s.amplitudes, s.num_qubits, h)


def fidelity(a: StateVector, b: StateVector) -> float:
    _check_same_size(a.num_qubits, b.num_qubits)
    overlap = abs(complex(np.vdot(a.amplitudes, b.amplitudes))) ** 2
    return float(min(1.0, max(0.0, overlap)))
