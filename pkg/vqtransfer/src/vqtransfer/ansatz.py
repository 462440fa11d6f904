"""Circuit builders: HEA, HVA and the pairwise-mirrored HVA variant, lowered to gate slots.

Every circuit carries a layout table mapping each parameter index to its
``(layer, position)`` address so the initialization strategies can copy
parameters between circuits of different sizes.
"""

from __future__ import annotations

import functools
from collections.abc import Sequence
from dataclasses import dataclass, replace
from enum import StrEnum

import numpy as np

from vqtransfer.errors import AnsatzError, InvalidSizeError, NonCommutingPartError
from vqtransfer.pauli import PauliSum, PauliTerm
from vqtransfer.statevector import (
    StateVector,
    cz_inplace,
    init_zero,
    pauli_exp_inplace,
    rotate_inplace,
)


class GateKind(StrEnum):
    ROT_X = "RotX"
    ROT_Z = "RotZ"
    CZ = "CZ"
    PAULI_EXP = "PauliExp"


class AnsatzKind(StrEnum):
    HEA = "hea"
    HVA = "hva"
    HVA_VARIANT = "hva_variant"
    NETWORK = "network"
    CUSTOM = "custom"


PARAMETERIZED = frozenset({GateKind.ROT_X, GateKind.ROT_Z, GateKind.PAULI_EXP})
HEA_ROTATIONS = (GateKind.ROT_Z, GateKind.ROT_X, GateKind.ROT_Z)


@dataclass(frozen=True)
class GateSlot:
    kind: GateKind
    qubits: tuple[int, ...]
    param_index: int | None = None
    fixed_term: PauliTerm | None = None

    def __post_init__(self) -> None:
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if kind in PARAMETERIZED and self.param_index is None:
            raise AnsatzError(f"{kind} gate on {self.qubits} needs a param_index")
        if kind is GateKind.CZ:
            if self.param_index is not None:
                raise AnsatzError("CZ gates carry no parameter")
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise AnsatzError(f"CZ needs two distinct qubits, got {self.qubits}")
        if kind in (GateKind.ROT_X, GateKind.ROT_Z) and len(self.qubits) != 1:
            raise AnsatzError(f"{kind} acts on exactly one qubit, got {self.qubits}")
        if kind is GateKind.PAULI_EXP:
            if self.fixed_term is None:
                raise AnsatzError("PauliExp gates need a fixed_term")
            if self.qubits != self.fixed_term.qubits:
                raise AnsatzError(
                    f"PauliExp qubits {self.qubits} differ from term qubits "
                    f"{self.fixed_term.qubits}"
                )

    def shifted(self, qubit_offset: int, param_offset: int) -> GateSlot:
        return GateSlot(
            self.kind,
            tuple(q + qubit_offset for q in self.qubits),
            None if self.param_index is None else self.param_index + param_offset,
            None if self.fixed_term is None else self.fixed_term.shifted(qubit_offset),
        )


@dataclass(frozen=True)
class ParamSlot:
    """Address of one parameter: ``layer`` and ``position`` inside that layer.

    HEA slots also name the ``qubit`` and ``rotation`` (0, 1, 2 for Rz, Rx, Rz);
    HVA slots name the Hamiltonian ``part``; network composites name the ``copy``.
    """

    layer: int
    position: int
    qubit: int | None = None
    rotation: int | None = None
    part: int | None = None
    copy: int = 0


@dataclass(frozen=True)
class CircuitSpec:
    num_qubits: int
    gates: tuple[GateSlot, ...]
    num_params: int
    layout: tuple[ParamSlot, ...]
    kind: AnsatzKind = AnsatzKind.CUSTOM
    layers: int = 1
    params_per_layer: int = 0
    copies: int = 1

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise InvalidSizeError(f"circuit needs at least one qubit, got {self.num_qubits}")
        if len(self.layout) != self.num_params:
            raise AnsatzError(
                f"layout has {len(self.layout)} entries for {self.num_params} parameters"
            )
        used = set()
        for gate in self.gates:
            if any(not 0 <= q < self.num_qubits for q in gate.qubits):
                raise AnsatzError(f"gate {gate.kind} on {gate.qubits} outside {self.num_qubits}")
            if gate.param_index is not None:
                used.add(gate.param_index)
        if used != set(range(self.num_params)):
            raise AnsatzError(
                f"parameter indices must be exactly 0..{self.num_params - 1}, each used by a gate"
            )

    @functools.cached_property
    def _index(self) -> dict[tuple[int, int, int], int]:
        return {(s.copy, s.layer, s.position): i for i, s in enumerate(self.layout)}

    def index_of(self, layer: int, position: int, copy: int = 0) -> int:
        try:
            return self._index[(copy, layer, position)]
        except KeyError:
            raise AnsatzError(
                f"no parameter at copy {copy}, layer {layer}, position {position}"
            ) from None

    def gates_using(self, param_index: int) -> list[GateSlot]:
        return [g for g in self.gates if g.param_index == param_index]


def _check_counts(n: int, layers: int, minimum_qubits: int = 1) -> None:
    if n < minimum_qubits:
        raise InvalidSizeError(f"need at least {minimum_qubits} qubits, got {n}")
    if layers < 1:
        raise InvalidSizeError(f"need at least one layer, got {layers}")


def _ring(start: int, size: int) -> list[GateSlot]:
    if size < 2:
        return []
    end = start + size - 1
    chain = [GateSlot(GateKind.CZ, (q, q + 1)) for q in range(start, end)]
    return [*chain, GateSlot(GateKind.CZ, (end, start))]


def build_hea(n: int, blocks: int, segments: Sequence[int] | None = None) -> CircuitSpec:
    """Hardware-efficient ansatz with ``3·n·blocks`` parameters.

    Each block applies Rz, Rx, Rz on qubit 0, then qubit 1, and so on, followed by
    CZ(0,1) … CZ(n-2,n-1) and the closing CZ(n-1,0). ``segments`` splits the
    register into independent CZ rings (sizes must sum to ``n``).
    """
    _check_counts(n, blocks, minimum_qubits=2)
    sizes = list(segments) if segments is not None else [n]
    if sum(sizes) != n or any(size < 1 for size in sizes):
        raise AnsatzError(f"segments {sizes} do not partition {n} qubits")

    entanglers: list[GateSlot] = []
    start = 0
    for size in sizes:
        entanglers.extend(_ring(start, size))
        start += size

    per_block = 3 * n
    gates: list[GateSlot] = []
    layout: list[ParamSlot] = []
    for p in range(blocks):
        for q in range(n):
            for r, kind in enumerate(HEA_ROTATIONS):
                gates.append(GateSlot(kind, (q,), p * per_block + 3 * q + r))
                layout.append(ParamSlot(layer=p, position=3 * q + r, qubit=q, rotation=r))
        gates.extend(entanglers)
    return CircuitSpec(
        n,
        tuple(gates),
        per_block * blocks,
        tuple(layout),
        kind=AnsatzKind.HEA,
        layers=blocks,
        params_per_layer=per_block,
    )


def _check_parts(parts: Sequence[PauliSum]) -> int:
    if not parts:
        raise AnsatzError("an HVA needs at least one Hamiltonian part")
    sizes = {part.num_qubits for part in parts}
    if len(sizes) != 1:
        raise AnsatzError(f"Hamiltonian parts act on different qubit counts: {sorted(sizes)}")
    for m, part in enumerate(parts):
        if not part.terms:
            raise AnsatzError(f"Hamiltonian part {m} has no terms")
        if not part.is_commuting():
            raise NonCommutingPartError(f"Hamiltonian part {m} has non-commuting terms")
    return sizes.pop()


def _build_hva(parts: Sequence[PauliSum], layers: int, mirrored: bool) -> CircuitSpec:
    n = _check_parts(parts)
    _check_counts(n, layers)
    num_parts = len(parts)
    gates: list[GateSlot] = []
    for p in range(layers):
        order = range(num_parts - 1, -1, -1) if mirrored and p % 2 == 1 else range(num_parts)
        for m in order:
            # exp(-iθH_m) = Π_k exp(-iθ c_k P_k) because the terms of H_m commute
            for term in parts[m]:
                gates.append(GateSlot(GateKind.PAULI_EXP, term.qubits, p * num_parts + m, term))
    layout = tuple(
        ParamSlot(layer=p, position=m, part=m) for p in range(layers) for m in range(num_parts)
    )
    return CircuitSpec(
        n,
        tuple(gates),
        num_parts * layers,
        layout,
        kind=AnsatzKind.HVA_VARIANT if mirrored else AnsatzKind.HVA,
        layers=layers,
        params_per_layer=num_parts,
    )


def build_hva(parts: Sequence[PauliSum], layers: int) -> CircuitSpec:
    """Hamiltonian variational ansatz: layer p applies exp(-iθ_{p,m} H_m) for m = 1…M."""
    return _build_hva(parts, layers, mirrored=False)


def build_hva_variant(parts: Sequence[PauliSum], layers: int) -> CircuitSpec:
    """HVA whose even layers run the parts in reverse, so layer pairs can cancel."""
    if layers % 2:
        raise AnsatzError(f"the mirrored HVA needs an even layer count, got {layers}")
    return _build_hva(parts, layers, mirrored=True)


def tile_network(base: CircuitSpec, m: int) -> CircuitSpec:
    """Concatenate ``m - n + 1`` copies of ``base``, copy ``i`` shifted onto qubits ``i…i+n-1``."""
    n = base.num_qubits
    if m < n:
        raise InvalidSizeError(f"target register ({m}) is smaller than the base circuit ({n})")
    copies = m - n + 1
    L = base.num_params
    gates = tuple(g.shifted(i, i * L) for i in range(copies) for g in base.gates)
    layout = tuple(
        replace(slot, qubit=None if slot.qubit is None else slot.qubit + i, copy=i)
        for i in range(copies)
        for slot in base.layout
    )
    return CircuitSpec(
        m,
        gates,
        L * copies,
        layout,
        kind=AnsatzKind.NETWORK,
        layers=base.layers,
        params_per_layer=base.params_per_layer,
        copies=copies,
    )


def apply_gate_inplace(
    psi: np.ndarray, n: int, gate: GateSlot, params: np.ndarray, inverse: bool = False
) -> None:
    if gate.kind is GateKind.CZ:
        cz_inplace(psi, n, gate.qubits[0], gate.qubits[1])
        return
    angle = float(params[gate.param_index])
    if inverse:
        angle = -angle
    if gate.kind is GateKind.ROT_X:
        rotate_inplace(psi, n, "X", gate.qubits[0], angle)
    elif gate.kind is GateKind.ROT_Z:
        rotate_inplace(psi, n, "Z", gate.qubits[0], angle)
    else:
        pauli_exp_inplace(psi, n, gate.fixed_term, angle)


def check_params(circuit: CircuitSpec, params: Sequence[float] | np.ndarray) -> np.ndarray:
    values = np.asarray(params, dtype=np.float64).reshape(-1)
    if values.shape[0] != circuit.num_params:
        raise AnsatzError(f"expected {circuit.num_params} parameters, got {values.shape[0]}")
    return values


def evaluate_buffer(
    circuit: CircuitSpec, params: Sequence[float] | np.ndarray, initial: StateVector | None = None
) -> np.ndarray:
    values = check_params(circuit, params)
    start = initial if initial is not None else init_zero(circuit.num_qubits)
    if start.num_qubits != circuit.num_qubits:
        raise AnsatzError(
            f"initial state has {start.num_qubits} qubits, circuit has {circuit.num_qubits}"
        )
    psi = start.copy_buffer()
    for gate in circuit.gates:
        apply_gate_inplace(psi, circuit.num_qubits, gate, values)
    return psi


def evaluate(
    circuit: CircuitSpec, params: Sequence[float] | np.ndarray, initial: StateVector | None = None
) -> StateVector:
    """``U(θ)|initial⟩`` with gates applied in sequence order; ``initial`` defaults to |0…0⟩."""
    return StateVector(circuit.num_qubits, evaluate_buffer(circuit, params, initial))
