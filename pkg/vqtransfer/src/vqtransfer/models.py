"""Lattice geometries, spin Hamiltonians and the (hamiltonian, circuit recipe) pair."""

from __future__ import annotations

import functools
from dataclasses import dataclass

from vqtransfer.ansatz import (
    AnsatzKind,
    CircuitSpec,
    build_hea,
    build_hva,
    build_hva_variant,
)
from vqtransfer.errors import AnsatzError, InvalidSizeError, QubitMismatchError
from vqtransfer.pauli import PauliSum, PauliTerm, ground_energy
from vqtransfer.statevector import StateVector

Bond = tuple[int, int]


@dataclass(frozen=True)
class Chain:
    sites: int

    def __post_init__(self) -> None:
        if self.sites < 2:
            raise InvalidSizeError(f"a chain needs at least 2 sites, got {self.sites}")

    @property
    def num_sites(self) -> int:
        return self.sites

        """Nearest-neighbour bonds; a ring of n sites has n bonds, so 2 sites couple twice."""
        """Nearest-neighbour bonds; a ring of ``n`` sites has ``n`` bonds, 2 sites pair twice."""
        bonds = [(i, i + 1) for i in range(self.sites - 1)]
        if periodic:
            bonds.append((self.sites - 1, 0))
        return bonds

    def __str__(self) -> str:
        return f"chain({self.sites})"


@dataclass(frozen=True)
class Grid:
    """``rows × cols`` lattice, sites indexed row-major (site ``r·cols + c``)."""

    rows: int
    cols: int

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1 or self.rows * self.cols < 2:
            raise InvalidSizeError(f"degenerate grid {self.rows}x{self.cols}")

    @property
    def num_sites(self) -> int:
        return self.rows * self.cols

    def site(self, row: int, col: int) -> int:
        return row * self.cols + col

    def bonds(self, periodic: bool) -> list[Bond]:
        bonds: list[Bond] = []
        for r in range(self.rows):
            for c in range(self.cols - 1):
                bonds.append((self.site(r, c), self.site(r, c + 1)))
            # wrapping a length-2 dimension would duplicate the bond
            if periodic and self.cols > 2:
                bonds.append((self.site(r, self.cols - 1), self.site(r, 0)))
        for c in range(self.cols):
            for r in range(self.rows - 1):
                bonds.append((self.site(r, c), self.site(r + 1, c)))
            if periodic and self.rows > 2:
                bonds.append((self.site(self.rows - 1, c), self.site(0, c)))
        return bonds

    def __str__(self) -> str:
        return f"grid({self.rows}x{self.cols})"


Geometry = Chain | Grid


def _two_site(coefficient: float, axis: str, bond: Bond) -> PauliTerm:
    i, j = bond
    return PauliTerm(coefficient, ((i, axis), (j, axis)))


def build_tfim(n: int, J: float = 1.0, h: float = 2.0, periodic: bool = True) -> PauliSum:
    """``H = -J Σ Z_i Z_j - h Σ X_i`` on a chain of ``n`` sites."""
    chain = Chain(n)
    terms = [_two_site(-J, "Z", bond) for bond in chain.bonds(periodic)]
    terms.extend(PauliTerm(-h, ((i, "X"),)) for i in range(n))
    return PauliSum(tuple(terms), n)


@dataclass(frozen=True)
class XXZModel:
    hamiltonian: PauliSum
    parts: tuple[PauliSum, PauliSum, PauliSum]


def build_xxz(
    geometry: Geometry | int, J: float = 1.0, delta: float = 2.0, periodic: bool = True
) -> XXZModel:
    """``H = -J Σ (X_i X_j + Y_i Y_j + Δ Z_i Z_j)`` split into ``(H_X, H_Y, H_Z)``."""
    if isinstance(geometry, int):
        geometry = Chain(geometry)
    n = geometry.num_sites
    bonds = geometry.bonds(periodic)
    h_x = PauliSum(tuple(_two_site(-J, "X", b) for b in bonds), n)
    h_y = PauliSum(tuple(_two_site(-J, "Y", b) for b in bonds), n)
    h_z = PauliSum(tuple(_two_site(-J * delta, "Z", b) for b in bonds), n)
    return XXZModel(h_x + h_y + h_z, (h_x, h_y, h_z))


@dataclass(frozen=True)
class Problem:
    """A Hamiltonian together with the recipe for its circuit.

    ``initial_state`` is the optional preparation hook; ``None`` means |0…0⟩.
    ``reference_energy`` is the value an external oracle wrote next to the
    Hamiltonian, kept for cross-checks.
    """

    name: str
    hamiltonian: PauliSum
    ansatz: AnsatzKind
    layers: int
    parts: tuple[PauliSum, ...] = ()
    initial_state: StateVector | None = None
    reference_energy: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "ansatz", AnsatzKind(self.ansatz))
        if self.ansatz in (AnsatzKind.HVA, AnsatzKind.HVA_VARIANT) and not self.parts:
            raise AnsatzError(f"{self.name}: an HVA problem needs Hamiltonian parts")
        if self.ansatz not in (AnsatzKind.HEA, AnsatzKind.HVA, AnsatzKind.HVA_VARIANT):
            raise AnsatzError(f"{self.name}: problems use hea, hva or hva_variant circuits")
        if self.initial_state is not None and self.initial_state.num_qubits != self.num_qubits:
            raise QubitMismatchError(
                f"{self.name}: initial state has {self.initial_state.num_qubits} qubits, "
                f"hamiltonian has {self.num_qubits}"
            )

    @property
    def num_qubits(self) -> int:
        return self.hamiltonian.num_qubits

    @functools.cached_property
    def exact_energy(self) -> float:
        return ground_energy(self.hamiltonian)

    def circuit(self) -> CircuitSpec:
        if self.ansatz is AnsatzKind.HEA:
            return build_hea(self.num_qubits, self.layers)
        if self.ansatz is AnsatzKind.HVA:
            return build_hva(self.parts, self.layers)
        return build_hva_variant(self.parts, self.layers)


def hea_problem(name: str, hamiltonian: PauliSum, layers: int, **kwargs) -> Problem:
    return Problem(name, hamiltonian, AnsatzKind.HEA, layers, **kwargs)


def hva_problem(
    name: str, model: XXZModel, layers: int, variant: bool = False, **kwargs
) -> Problem:
    kind = AnsatzKind.HVA_VARIANT if variant else AnsatzKind.HVA
    return Problem(name, model.hamiltonian, kind, layers, parts=model.parts, **kwargs)
