"""Initial parameters: cold start, network transfer, structure transfer and block-identity (BLE)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from vqtransfer.ansatz import AnsatzKind, CircuitSpec, tile_network
from vqtransfer.errors import (
    AnsatzError,
    ConfigurationError,
    InvalidSizeError,
    TransferError,
    UnsupportedAnsatzError,
)
from vqtransfer.pool import check_shape, pool_draw
from vqtransfer.records import ParamPool
from vqtransfer.tasks import BLE, TaskSpec, validate_init_string

InitMethod = Literal["random", "network", "structure", "ble"]

_HVA_KINDS = (AnsatzKind.HVA, AnsatzKind.HVA_VARIANT)


@dataclass(frozen=True)
class TransferString:
    """Per-block markers: ``T`` copies the base solution, ``R`` draws fresh parameters."""

    symbols: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.symbols:
            raise TransferError("transfer string must not be empty")
        bad = sorted({s for s in self.symbols if s not in ("T", "R")})
        if bad:
            raise TransferError(f"transfer string symbols must be T or R, got {bad}")

    @classmethod
    def parse(cls, text: str) -> TransferString:
        return cls(tuple(text.strip().upper()))

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        return "".join(self.symbols)

    @property
    def has_transfer(self) -> bool:
        return "T" in self.symbols


def _as_string(s: TransferString | str) -> TransferString:
    return s if isinstance(s, TransferString) else TransferString.parse(s)


def _base_params(base: CircuitSpec, theta_star) -> np.ndarray:
    theta = np.asarray(theta_star, dtype=np.float64).reshape(-1)
    if theta.shape[0] != base.num_params:
        raise TransferError(
            f"base solution has {theta.shape[0]} values, base circuit needs {base.num_params}"
        )
    return theta


def random_params(L: int, rng: np.random.Generator) -> np.ndarray:
    """``L`` independent draws, uniform on ``[-π, π)``."""
    if L < 1:
        raise InvalidSizeError(f"parameter count must be >= 1, got {L}")
    return rng.uniform(-math.pi, math.pi, size=L)


def network_transfer(
    base: CircuitSpec,
    theta_star,
    m: int,
    s: TransferString | str,
    rng: np.random.Generator,
) -> tuple[CircuitSpec, np.ndarray]:
    """Tile ``m - n + 1`` copies of ``base``; copy ``i`` starts from θ* if ``s[i]`` is T."""
    s = _as_string(s)
    if base.kind is not AnsatzKind.HEA:
        raise UnsupportedAnsatzError(
            f"network transfer needs a problem-agnostic (hea) base circuit, got {base.kind}"
        )
    theta = _base_params(base, theta_star)
    target = tile_network(base, m)
    if len(s) != target.copies:
        raise TransferError(
            f"network transfer to {m} qubits needs a string of length {target.copies}, got {s}"
        )
    blocks = [
        theta.copy() if symbol == "T" else random_params(base.num_params, rng)
        for symbol in s.symbols
    ]
    return target, np.concatenate(blocks)


def structure_transfer(
    base: CircuitSpec,
    theta_star,
    target: CircuitSpec,
    s: TransferString | str,
    rng: np.random.Generator,
) -> np.ndarray:
    """Copy base layers into the T blocks of ``target``; everything else is random.

    The target layers split into ``len(s)`` contiguous blocks of equal depth.
    Target layer ``p`` of a T block takes base layer ``p mod base.layers``.
    HEA base qubits land on the lowest-indexed target qubits.
    """
    s = _as_string(s)
    theta = _base_params(base, theta_star)
    if target.layers % len(s):
        raise TransferError(
            f"{target.layers} target layers do not split into {len(s)} equal blocks"
        )
    hea = base.kind is AnsatzKind.HEA and target.kind is AnsatzKind.HEA
    hva = base.kind in _HVA_KINDS and target.kind in _HVA_KINDS
    if not (hea or hva):
        raise TransferError(f"cannot structure-transfer from {base.kind} to {target.kind}")
    if hea and base.num_qubits > target.num_qubits:
        raise TransferError(
            f"base circuit ({base.num_qubits} qubits) is wider than the target "
            f"({target.num_qubits})"
        )
    if hva and base.params_per_layer != target.params_per_layer:
        raise TransferError(
            f"base has {base.params_per_layer} Hamiltonian parts, target has "
            f"{target.params_per_layer}"
        )

    params = random_params(target.num_params, rng)
    # HEA positions 3q+r coincide for q < n_base; HVA positions are the part index
    positions = 3 * base.num_qubits if hea else base.params_per_layer
    depth = target.layers // len(s)
    for j, symbol in enumerate(s.symbols):
        if symbol != "T":
            continue
        for p in range(j * depth, (j + 1) * depth):
            source = p % base.layers
            for position in range(positions):
                params[target.index_of(p, position)] = theta[base.index_of(source, position)]
    return params


def ble_init(circuit: CircuitSpec, rng: np.random.Generator) -> np.ndarray:
    """Random odd layers, each followed by its negation, so every layer pair is the identity."""
    if circuit.kind is not AnsatzKind.HVA_VARIANT:
        raise AnsatzError(
            f"block-identity initialization needs an hva_variant circuit, got {circuit.kind}"
        )
    params = np.zeros(circuit.num_params)
    M = circuit.params_per_layer
    for p in range(0, circuit.layers, 2):
        values = random_params(M, rng)
        for m in range(M):
            params[circuit.index_of(p, m)] = values[m]
            params[circuit.index_of(p + 1, m)] = -values[m]
    return params


@dataclass(frozen=True)
class InitPlan:
    """How the trials of one run obtain their starting parameters.

    ``base`` and ``pool`` are only needed when ``string`` contains T.
    """

    method: InitMethod
    circuit: CircuitSpec
    label: str
    string: TransferString | None = None
    base: CircuitSpec | None = None
    pool: ParamPool | None = None

    @classmethod
    def cold(cls, circuit: CircuitSpec, label: str = "R") -> InitPlan:
        return cls("random", circuit, label)

    @classmethod
    def for_task(
        cls,
        task: TaskSpec,
        init: str,
        pool: ParamPool | None = None,
        allow_untabulated: bool = False,
    ) -> InitPlan:
        """Validate ``init`` for ``task`` before any trial runs."""
        label = validate_init_string(task, init, allow_untabulated)
        circuit = task.target_circuit()
        if label == BLE:
            return cls("ble", circuit, label)
        string = TransferString.parse(label)
        if not string.has_transfer:
            return cls("random", circuit, label, string)
        if pool is None:
            raise ConfigurationError(
                f"init string {label} transfers parameters but no pool was given for task "
                f"{task.id}; run `vqtransfer base {task.id}` first"
            )
        base = task.base_problem().circuit()
        check_shape(pool, base)
        if not pool.entries:
            raise ConfigurationError(f"pool for task {task.id} has no entries")
        return cls(task.transfer_method, circuit, label, string, base, pool)

    def materialize(self, rng: np.random.Generator) -> np.ndarray:
        if self.method == "random":
            return random_params(self.circuit.num_params, rng)
        if self.method == "ble":
            return ble_init(self.circuit, rng)
        if self.pool is None or self.base is None or self.string is None:
            raise ConfigurationError(f"{self.method} initialization needs a base pool")
        theta = np.asarray(pool_draw(self.pool, rng).params)
        if self.method == "network":
            return network_transfer(self.base, theta, self.circuit.num_qubits, self.string, rng)[1]
        return structure_transfer(self.base, theta, self.circuit, self.string, rng)
