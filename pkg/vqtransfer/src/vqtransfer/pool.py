"""Parameter pools: successful base-task solutions, persisted as JSON and drawn uniformly."""

from __future__ import annotations

import json
from collections.abc import Sequence
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from vqtransfer.ansatz import CircuitSpec
from vqtransfer.errors import PoolError
from vqtransfer.logger import logger
from vqtransfer.records import POOL_VERSION, ParamPool, PoolEntry, RunManifest, TrialRecord
from vqtransfer.tasks import TaskSpec


def build_pool(
    task: TaskSpec, records: Sequence[TrialRecord], manifest: RunManifest | None = None
) -> ParamPool:
    """Collect the successful base-task trials of ``task`` into a pool."""
    base = task.base_problem()
    circuit = base.circuit()
    entries = [
        PoolEntry(seed=r.seed, energy=r.final_energy, params=r.final_params)
        for r in sorted(records, key=lambda r: r.trial_index)
        if r.success and r.final_energy is not None
    ]
    return ParamPool(
        task=task.id,
        ansatz=str(circuit.kind),
        n=circuit.num_qubits,
        layers=circuit.layers,
        num_params=circuit.num_params,
        exact_energy=base.exact_energy,
        success_threshold=task.success_threshold,
        entries=entries,
        manifest=manifest,
    )


def check_shape(pool: ParamPool, circuit: CircuitSpec) -> None:
    expected = (str(circuit.kind), circuit.num_qubits, circuit.layers, circuit.num_params)
    actual = (pool.ansatz, pool.n, pool.layers, pool.num_params)
    if actual != expected:
        raise PoolError(
            f"pool for task {pool.task} has shape (ansatz, n, layers, L) = {actual}, "
            f"circuit needs {expected}"
        )


def pool_save(pool: ParamPool, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(pool.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.debug("pool saved", extra={"path": str(path), "entries": len(pool.entries)})


def pool_load(path: str | Path, expect: CircuitSpec | None = None) -> ParamPool:
    """Read a pool; ``expect`` additionally checks it fits that base circuit."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise PoolError(f"{path}: not valid JSON: {exc}") from None
    version = raw.get("version") if isinstance(raw, dict) else None
    if version != POOL_VERSION:
        raise PoolError(f"{path}: pool version {version!r}, expected {POOL_VERSION}")
    try:
        pool = ParamPool.model_validate(raw)
    except ValidationError as exc:
        raise PoolError(f"{path}: {exc}") from None
    if expect is not None:
        check_shape(pool, expect)
    logger.debug("pool loaded", extra={"path": str(path), "entries": len(pool.entries)})
    return pool


def pool_draw(pool: ParamPool, rng: np.random.Generator) -> PoolEntry:
    if not pool.entries:
        raise PoolError(f"pool for task {pool.task} is empty")
    return pool.entries[int(rng.integers(len(pool.entries)))]
