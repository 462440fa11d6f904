"""Pauli strings, real-weighted Pauli sums, dense materialization and exact ground states.

Basis ordering is little-endian throughout: qubit ``k`` is bit ``k`` of the basis index.
"""

from __future__ import annotations

import functools
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from numbers import Real

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from vqtransfer.errors import (
    InvalidSizeError,
    PauliTermError,
    QubitIndexError,
    QubitMismatchError,
    SizeLimitError,
)
from vqtransfer.logger import logger

AXES = ("X", "Y", "Z")
DROP_THRESHOLD = 1e-12
DENSE_LIMIT = 12
DENSE_EIGH_LIMIT = 10
# (perm, phase) tables are cached only up to this size; 1024 entries stay under 100 MB
CACHE_MAX_QUBITS = 12

Factor = tuple[int, str]

_I_POWERS = (1.0 + 0j, 1j, -1.0 + 0j, -1j)


def _real(value: object) -> float:
    if isinstance(value, complex | np.complexfloating):
        raise PauliTermError(f"Pauli coefficients must be real, got {value!r}")
    if not isinstance(value, Real | np.floating | np.integer):
        raise PauliTermError(f"Pauli coefficient must be a real number, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class PauliTerm:
    """``coefficient · P`` with ``P`` a tensor product of single-qubit Paulis.

    ``factors`` is normalized to strictly increasing qubit order on construction;
    an empty ``factors`` is the identity.
    """

    coefficient: float
    factors: tuple[Factor, ...] = ()

    def __post_init__(self) -> None:
        factors: list[Factor] = []
        for qubit, axis in self.factors:
            q = int(qubit)
            a = str(axis).upper()
            if q < 0:
                raise QubitIndexError(f"negative qubit index {q}")
            if a not in AXES:
                raise PauliTermError(f"unknown Pauli axis {axis!r} on qubit {q}")
            factors.append((q, a))
        factors.sort()
        qubits = [q for q, _ in factors]
        if len(set(qubits)) != len(qubits):
            raise PauliTermError(f"duplicate qubit index in Pauli term {self.factors!r}")
        object.__setattr__(self, "coefficient", _real(self.coefficient))
        object.__setattr__(self, "factors", tuple(factors))

    @classmethod
    def from_word(cls, coefficient: float, word: str) -> PauliTerm:
        """Build a term from an ``IXYZ`` word; character ``k`` is the axis on qubit ``k``."""
        factors = []
        for k, char in enumerate(word.upper()):
            if char == "I":
                continue
            if char not in AXES:
                raise PauliTermError(f"invalid Pauli character {char!r} in {word!r}")
            factors.append((k, char))
        return cls(coefficient, tuple(factors))

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.factors)

    @property
    def max_qubit(self) -> int:
        return self.factors[-1][0] if self.factors else -1

    @property
    def is_identity(self) -> bool:
        return not self.factors

    def word(self, num_qubits: int) -> str:
        if self.max_qubit >= num_qubits:
            raise QubitIndexError(f"term acts on qubit {self.max_qubit} but n={num_qubits}")
        chars = ["I"] * num_qubits
        for q, axis in self.factors:
            chars[q] = axis
        return "".join(chars)

    def commutes_with(self, other: PauliTerm) -> bool:
        mine = dict(self.factors)
        clashes = sum(1 for q, axis in other.factors if q in mine and mine[q] != axis)
        return clashes % 2 == 0

    def shifted(self, offset: int) -> PauliTerm:
        return PauliTerm(self.coefficient, tuple((q + offset, a) for q, a in self.factors))

    def scaled(self, alpha: float) -> PauliTerm:
        return PauliTerm(self.coefficient * alpha, self.factors)

    def __str__(self) -> str:
        body = " ".join(f"{a}{q}" for q, a in self.factors) or "I"
        return f"{self.coefficient!r} {body}"


@dataclass(frozen=True)
class PauliSum:
    """A Hermitian operator ``Σ c_I P_I`` on ``num_qubits`` qubits.

    Construction canonicalizes: identical strings are merged, terms with
    ``|c| < 1e-12`` are dropped, and terms are sorted by factor sequence.
    """

    terms: tuple[PauliTerm, ...]
    num_qubits: int

    def __post_init__(self) -> None:
        n = int(self.num_qubits)
        if n < 1:
            raise InvalidSizeError(f"a Pauli sum needs at least one qubit, got n={n}")
        merged: dict[tuple[Factor, ...], float] = {}
        for term in self.terms:
            if not isinstance(term, PauliTerm):
                raise PauliTermError(f"expected PauliTerm, got {type(term).__name__}")
            if term.max_qubit >= n:
                raise QubitIndexError(f"term {term} acts on qubit {term.max_qubit} but n={n}")
            merged[term.factors] = merged.get(term.factors, 0.0) + term.coefficient
        terms = tuple(
            PauliTerm(coefficient, factors)
            for factors, coefficient in sorted(merged.items())
            if abs(coefficient) >= DROP_THRESHOLD
        )
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "num_qubits", n)

    @classmethod
    def identity(cls, num_qubits: int, coefficient: float = 1.0) -> PauliSum:
        return cls((PauliTerm(coefficient),), num_qubits)

    def __iter__(self) -> Iterator[PauliTerm]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: PauliSum | float) -> PauliSum:
        if isinstance(other, PauliSum):
            if other.num_qubits != self.num_qubits:
                raise QubitMismatchError(
                    f"cannot add sums on {self.num_qubits} and {other.num_qubits} qubits"
                )
            return PauliSum(self.terms + other.terms, self.num_qubits)
        return PauliSum(self.terms + (PauliTerm(_real(other)),), self.num_qubits)

    __radd__ = __add__

    def __mul__(self, alpha: float) -> PauliSum:
        scale = _real(alpha)
        return PauliSum(tuple(t.scaled(scale) for t in self.terms), self.num_qubits)

    __rmul__ = __mul__

    def __neg__(self) -> PauliSum:
        return self * -1.0

    def __sub__(self, other: PauliSum | float) -> PauliSum:
        return self + (-other)

    def one_norm(self) -> float:
        return float(sum(abs(t.coefficient) for t in self.terms))

    def embed(self, offset: int, num_qubits: int) -> PauliSum:
        """Relabel qubit ``q`` as ``q + offset`` inside a register of ``num_qubits``."""
        return PauliSum(tuple(t.shifted(offset) for t in self.terms), num_qubits)

    def is_commuting(self) -> bool:
        terms = self.terms
        return all(a.commutes_with(b) for i, a in enumerate(terms) for b in terms[i + 1 :])


def canonicalize(terms: Iterable[PauliTerm], n: int) -> PauliSum:
    return PauliSum(tuple(terms), n)


def _parity(values: np.ndarray, mask: int) -> np.ndarray:
    parity = np.zeros_like(values)
    bit = 0
    while mask >> bit:
        if (mask >> bit) & 1:
            parity ^= (values >> bit) & 1
        bit += 1
    return parity


def pauli_action(factors: tuple[Factor, ...], num_qubits: int) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(perm, phase)`` such that ``(P ψ)[j] = phase[j] · ψ[perm[j]]``.

    Tables for more than ``CACHE_MAX_QUBITS`` qubits are rebuilt on every call.
    """
    if num_qubits > CACHE_MAX_QUBITS:
        return _build_action(factors, num_qubits)
    return _cached_action(factors, num_qubits)


@functools.lru_cache(maxsize=1024)
def _cached_action(factors: tuple[Factor, ...], num_qubits: int) -> tuple[np.ndarray, np.ndarray]:
    return _build_action(factors, num_qubits)


def _build_action(factors: tuple[Factor, ...], num_qubits: int) -> tuple[np.ndarray, np.ndarray]:
    # P|b⟩ = i^{n_Y} (-1)^{|b ∧ z|} |b ⊕ x⟩; x marks X/Y factors, z marks Z/Y factors
    x_mask = z_mask = n_y = 0
    for q, axis in factors:
        bit = 1 << q
        if axis in ("X", "Y"):
            x_mask |= bit
        if axis in ("Z", "Y"):
            z_mask |= bit
        if axis == "Y":
            n_y += 1
    perm = np.arange(1 << num_qubits, dtype=np.int64) ^ x_mask
    signs = 1 - 2 * _parity(perm, z_mask)
    phase = _I_POWERS[n_y % 4] * signs.astype(np.complex128)
    perm.setflags(write=False)
    phase.setflags(write=False)
    return perm, phase


def to_dense(h: PauliSum) -> np.ndarray:
    n = h.num_qubits
    if n > DENSE_LIMIT:
        raise SizeLimitError(f"dense materialization is limited to {DENSE_LIMIT} qubits, got {n}")
    dim = 1 << n
    matrix = np.zeros((dim, dim), dtype=np.complex128)
    rows = np.arange(dim)
    for term in h:
        perm, phase = pauli_action(term.factors, n)
        matrix[rows, perm] += term.coefficient * phase
    return matrix


def to_sparse(h: PauliSum) -> sp.csr_matrix:
    n = h.num_qubits
    dim = 1 << n
    rows = np.arange(dim)
    if not h.terms:
        return sp.csr_matrix((dim, dim), dtype=np.complex128)
    row_idx, col_idx, data = [], [], []
    for term in h:
        perm, phase = pauli_action(term.factors, n)
        row_idx.append(rows)
        col_idx.append(perm)
        data.append(term.coefficient * phase)
    return sp.coo_matrix(
        (np.concatenate(data), (np.concatenate(row_idx), np.concatenate(col_idx))),
        shape=(dim, dim),
    ).tocsr()


def ground_state(h: PauliSum) -> tuple[float, np.ndarray]:
    """Lowest eigenvalue and a matching unit eigenvector (arbitrary phase)."""
    n = h.num_qubits
    if n > DENSE_LIMIT:
        raise SizeLimitError(f"exact ground states are limited to {DENSE_LIMIT} qubits, got {n}")
    if n <= DENSE_EIGH_LIMIT:
        values, vectors = np.linalg.eigh(to_dense(h))
        return float(values[0]), vectors[:, 0]
    logger.debug("iterative ground state", extra={"num_qubits": n, "terms": len(h)})
    values, vectors = spla.eigsh(to_sparse(h), k=1, which="SA", tol=1e-13)
    vector = vectors[:, 0]
    return float(values[0]), vector / np.linalg.norm(vector)


def ground_energy(h: PauliSum) -> float:
    return ground_state(h)[0]


def ground_space(h: PauliSum, tol: float = 1e-8) -> tuple[float, np.ndarray]:
    """Ground energy and an orthonormal basis (columns) of its eigenspace."""
    n = h.num_qubits
    if n > DENSE_LIMIT:
        raise SizeLimitError(f"exact ground spaces are limited to {DENSE_LIMIT} qubits, got {n}")
    values, vectors = np.linalg.eigh(to_dense(h))
    degenerate = values - values[0] <= tol
    return float(values[0]), vectors[:, degenerate]
