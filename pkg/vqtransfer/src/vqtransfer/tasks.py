"""Benchmark task registry: base/target problems, transfer method and tabulated init strings."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

from vqtransfer.ansatz import CircuitSpec, tile_network
from vqtransfer.config import TasksConfig
from vqtransfer.errors import ConfigurationError, TransferError
from vqtransfer.hamiltonian_loader import load_hamiltonian_file
from vqtransfer.logger import logger
from vqtransfer.models import Chain, Grid, Problem, build_tfim, build_xxz, hea_problem, hva_problem

CHEMICAL_ACCURACY = 1.6e-3
TASK_IDS = ("A", "B", "C", "D", "E", "F")
BLE = "BLE"

TransferMethod = Literal["network", "structure"]

_TRANSFER_STRING = re.compile(r"^[TR]+$")


@dataclass(frozen=True)
class TaskSpec:
    """One benchmark task.

    ``base`` and ``target`` are ``None`` only when the task is unavailable
    (``unavailable_reason`` says why); use ``base_problem()``/``target_problem()``.
    ``reference_ttn`` holds the published total trial numbers per init string.
    """

    id: str
    title: str
    base: Problem | None
    target: Problem | None
    transfer_method: TransferMethod
    string_length: int
    allowed_init_strings: tuple[str, ...]
    success_threshold: float = CHEMICAL_ACCURACY
    target_successes: int = 100
    max_trials: int | None = None
    comparisons: tuple[str, ...] = ()
    boundary: dict[str, str] = field(default_factory=dict)
    reference_ttn: dict[str, int] = field(default_factory=dict)
    unavailable_reason: str | None = None

    def __post_init__(self) -> None:
        if self.success_threshold <= 0:
            raise ConfigurationError(f"task {self.id}: success threshold must be > 0")
        for text in self.allowed_init_strings:
            if len(text) != self.string_length:
                raise ConfigurationError(
                    f"task {self.id}: init string {text!r} is not of length {self.string_length}"
                )

    @property
    def available(self) -> bool:
        return self.unavailable_reason is None

    def base_problem(self) -> Problem:
        if self.base is None:
            raise ConfigurationError(f"task {self.id} is unavailable: {self.unavailable_reason}")
        return self.base

    def target_problem(self) -> Problem:
        if self.target is None:
            raise ConfigurationError(f"task {self.id} is unavailable: {self.unavailable_reason}")
        return self.target

    def target_circuit(self) -> CircuitSpec:
        """The circuit every target trial trains, whatever its initialization."""
        if self.transfer_method == "network":
            return tile_network(self.base_problem().circuit(), self.target_problem().num_qubits)
        return self.target_problem().circuit()


def validate_init_string(task: TaskSpec, text: str, allow_untabulated: bool = False) -> str:
    """Normalize ``text`` and check it against ``task``; returns the canonical form.

    T/R strings must be tabulated for the task or be all-T / all-R. Any other
    string of the right length needs ``allow_untabulated`` and logs a warning.
    """
    value = text.strip().upper()
    if value == BLE:
        if BLE not in task.comparisons:
            raise TransferError(f"task {task.id} has no {BLE} comparison")
        return value
    if not _TRANSFER_STRING.match(value):
        raise TransferError(f"init string {text!r} must use only T and R (or be {BLE})")
    if len(value) != task.string_length:
        raise TransferError(
            f"task {task.id} needs init strings of length {task.string_length}, got {value!r}"
        )
    if value in task.allowed_init_strings or len(set(value)) == 1:
        return value
    if not allow_untabulated:
        raise TransferError(
            f"init string {value} is not tabulated for task {task.id} "
            f"(tabulated: {', '.join(task.allowed_init_strings)}); "
            "pass --allow-untabulated to run it anyway"
        )
    logger.warning(
        "init string is not one of the tabulated ones",
        extra={"task": task.id, "init": value, "tabulated": list(task.allowed_init_strings)},
    )
    return value


def _layers(config: TasksConfig, task_id: str, base: int, target: int) -> tuple[int, int]:
    override = config.layers.get(task_id)
    if override is None:
        return base, target
    return override.base or base, override.target or target


def _chemistry_problems(
    chemistry_dir: Path, base_layers: int, target_layers: int
) -> tuple[Problem | None, Problem | None, str | None]:
    h2_path = chemistry_dir / "h2.txt"
    h3_path = chemistry_dir / "h3.txt"
    missing = [str(p) for p in (h2_path, h3_path) if not p.exists()]
    if missing:
        return None, None, f"chemistry Hamiltonian file(s) missing: {', '.join(missing)}"
    h2 = load_hamiltonian_file(h2_path)
    h3 = load_hamiltonian_file(h3_path)
    base = hea_problem("H2", h2.hamiltonian, base_layers, reference_energy=h2.reference_energy)
    target = hea_problem("H3", h3.hamiltonian, target_layers, reference_energy=h3.reference_energy)
    return base, target, None


def task_registry(config: TasksConfig | None = None) -> list[TaskSpec]:
    """Build tasks A–F with their benchmark hyperparameters and any config overrides applied."""
    config = config or TasksConfig()
    chain_periodic = config.boundary.chain == "periodic"
    grid_periodic = config.boundary.grid == "periodic"
    chain_boundary = {"chain": config.boundary.chain}

    def common(task_id: str) -> dict:
        return {
            "success_threshold": config.thresholds.get(task_id, CHEMICAL_ACCURACY),
            "target_successes": config.target_successes,
            "max_trials": config.max_trials,
        }

    tasks: list[TaskSpec] = []

    for task_id, target_n, strings, ttn in (
        ("A", 6, ("TTT", "RRT", "TTR", "RRR"), (101, 105, 113, 115)),
        ("B", 8, ("TTTTT", "TRTRT", "RTRTR", "RRRRR"), (105, 103, 102, 111)),
    ):
        base_layers, target_layers = _layers(config, task_id, 4, 4)
        if target_layers != base_layers:
            logger.warning(
                "network transfer tiles the base circuit; target layer override ignored",
                extra={"task": task_id, "base": base_layers, "target": target_layers},
            )
        tasks.append(
            TaskSpec(
                id=task_id,
                title=f"TFIM 4 -> {target_n} qubits, HEA, network transfer",
                base=hea_problem("TFIM-4", build_tfim(4, 1.0, 2.0, chain_periodic), base_layers),
                target=hea_problem(
                    f"TFIM-{target_n}",
                    build_tfim(target_n, 1.0, 2.0, chain_periodic),
                    base_layers,
                ),
                transfer_method="network",
                string_length=target_n - 4 + 1,
                allowed_init_strings=strings,
                boundary=chain_boundary,
                reference_ttn=dict(zip(strings, ttn, strict=True)),
                **common(task_id),
            )
        )

    base_layers, target_layers = _layers(config, "C", 4, 8)
    base, target, reason = _chemistry_problems(config.chemistry_dir, base_layers, target_layers)
    tasks.append(
        TaskSpec(
            id="C",
            title="H2 (4 qubits) -> H3 (6 qubits), HEA, structure transfer",
            base=base,
            target=target,
            transfer_method="structure",
            string_length=2,
            allowed_init_strings=("TT", "TR", "RT", "RR"),
            reference_ttn={"TT": 372, "TR": 326, "RT": 291, "RR": 634},
            unavailable_reason=reason,
            **common("C"),
        )
    )

    for task_id, variant, ttn in (
        ("D", False, {"TT": 160, "TR": 130, "RT": 138, "RR": 240}),
        ("F", True, {"TT": 112, "TR": 126, "RT": 128, "RR": 143, BLE: 144}),
    ):
        base_layers, target_layers = _layers(config, task_id, 4, 8)
        label = "HVA variant" if variant else "HVA"
        tasks.append(
            TaskSpec(
                id=task_id,
                title=f"XXZ chain 4 -> 8 qubits, {label}, structure transfer",
                base=hva_problem(
                    "XXZ-chain-4",
                    build_xxz(Chain(4), 1.0, 2.0, chain_periodic),
                    base_layers,
                    variant,
                ),
                target=hva_problem(
                    "XXZ-chain-8",
                    build_xxz(Chain(8), 1.0, 2.0, chain_periodic),
                    target_layers,
                    variant,
                ),
                transfer_method="structure",
                string_length=2,
                allowed_init_strings=("TT", "TR", "RT", "RR"),
                comparisons=(BLE,) if variant else (),
                boundary=chain_boundary,
                reference_ttn=ttn,
                **common(task_id),
            )
        )

    base_layers, target_layers = _layers(config, "E", 4, 8)
    tasks.append(
        TaskSpec(
            id="E",
            title="XXZ chain 4 -> grid 2x4, HEA, structure transfer",
            base=hea_problem(
                "XXZ-chain-4",
                build_xxz(Chain(4), 1.0, 2.0, chain_periodic).hamiltonian,
                base_layers,
            ),
            target=hea_problem(
                "XXZ-grid-2x4",
                build_xxz(Grid(2, 4), 1.0, 2.0, grid_periodic).hamiltonian,
                target_layers,
            ),
            transfer_method="structure",
            string_length=4,
            allowed_init_strings=("TTTT", "TRRT", "RTTR", "RRRR"),
            boundary={"chain": config.boundary.chain, "grid": config.boundary.grid},
            reference_ttn={"TTTT": 100, "TRRT": 100, "RTTR": 100, "RRRR": 102},
            **common("E"),
        )
    )

    tasks.sort(key=lambda task: task.id)
    logger.debug(
        "task registry built",
        extra={
            "tasks": [t.id for t in tasks],
            "unavailable": [t.id for t in tasks if not t.available],
        },
    )
    return tasks


def get_task(task_id: str, config: TasksConfig | None = None) -> TaskSpec:
    key = task_id.strip().upper()
    for task in task_registry(config):
        if task.id == key:
            return task
    raise ConfigurationError(f"unknown task {task_id!r}; expected one of {', '.join(TASK_IDS)}")
