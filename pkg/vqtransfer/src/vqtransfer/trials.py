"""The trial protocol: seeded BFGS runs repeated until enough of them reach the ground energy."""

from __future__ import annotations

import time
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from vqtransfer.ansatz import CircuitSpec
from vqtransfer.analysis import summarize
from vqtransfer.config import OptimizerConfig
from vqtransfer.errors import ConfigurationError
from vqtransfer.initialization import InitPlan
from vqtransfer.logger import logger
from vqtransfer.optimize import bfgs_minimize
from vqtransfer.pauli import PauliSum
from vqtransfer.pool import build_pool
from vqtransfer.records import ParamPool, RunManifest, TaskSummary, TrialRecord
from vqtransfer.statevector import StateVector
from vqtransfer.tasks import TaskSpec

RecordSink = Callable[[TrialRecord], None]


def trial_seed(master_seed: int, index: int) -> int:
    """64-bit seed of trial ``index``; depends only on ``(master_seed, index)``."""
    sequence = np.random.SeedSequence(master_seed, spawn_key=(index,))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class TrialSetup:
    """Everything a worker process needs to run one trial."""

    hamiltonian: PauliSum
    plan: InitPlan
    exact_energy: float
    success_threshold: float
    optimizer: OptimizerConfig
    initial: StateVector | None = None

    @property
    def circuit(self) -> CircuitSpec:
        return self.plan.circuit


def run_trial(setup: TrialSetup, master_seed: int, index: int) -> TrialRecord:
    seed = trial_seed(master_seed, index)
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    params = setup.plan.materialize(rng)
    result = bfgs_minimize(
        setup.circuit, setup.hamiltonian, params, setup.optimizer, setup.initial
    )
    success = (
        not result.failed
        and result.energy is not None
        and abs(result.energy - setup.exact_energy) < setup.success_threshold
    )
    return TrialRecord(
        trial_index=index,
        init=setup.plan.label,
        seed=seed,
        initial_params=params.tolist(),
        final_params=result.params.tolist(),
        final_energy=result.energy,
        exact_energy=setup.exact_energy,
        success_threshold=setup.success_threshold,
        iterations=result.iterations,
        converged=result.converged,
        success=success,
        failed=result.failed,
        grad_norm_trace=result.grad_norm_trace,
        energy_trace=result.energy_trace,
        wall_time=time.perf_counter() - start,
        message=result.message,
    )


def run_trials(
    setup: TrialSetup,
    master_seed: int,
    target_successes: int,
    workers: int = 1,
    max_trials: int | None = None,
    on_record: RecordSink | None = None,
) -> list[TrialRecord]:
    """Run trials 0, 1, 2, … until ``target_successes`` succeed (or ``max_trials`` ran).

    Trials run in batches of ``workers``; each batch is sorted by index and cut
    at the trial that completes the target, so the records do not depend on
    ``workers``.
    """
    if target_successes < 1:
        raise ConfigurationError(f"target successes must be >= 1, got {target_successes}")
    if workers < 1:
        raise ConfigurationError(f"workers must be >= 1, got {workers}")

    records: list[TrialRecord] = []
    successes = 0
    next_index = 0
    executor = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while successes < target_successes:
            if max_trials is not None and next_index >= max_trials:
                logger.warning(
                    "trial cap reached before the success target",
                    extra={"max_trials": max_trials, "successes": successes},
                )
                break
            batch = workers
            if max_trials is not None:
                batch = min(batch, max_trials - next_index)
            indices = list(range(next_index, next_index + batch))
            next_index += batch
            if executor is None:
                finished = [run_trial(setup, master_seed, i) for i in indices]
            else:
                finished = list(
                    executor.map(run_trial, [setup] * batch, [master_seed] * batch, indices)
                )
            for record in sorted(finished, key=lambda r: r.trial_index):
                records.append(record)
                successes += record.success
                logger.debug(
                    "trial finished",
                    extra={
                        "trial": record.trial_index,
                        "success": record.success,
                        "energy": record.final_energy,
                        "iterations": record.iterations,
                    },
                )
                if on_record is not None:
                    on_record(record)
                if successes >= target_successes:
                    break
    finally:
        if executor is not None:
            executor.shutdown()
    logger.info(
        f"{len(records)} trials, {successes} successes",
        extra={"ttn": len(records), "successes": successes, "init": setup.plan.label},
    )
    return records


def run_task(
    task: TaskSpec,
    init: str,
    master_seed: int,
    target_successes: int | None = None,
    pool: ParamPool | None = None,
    workers: int = 1,
    optimizer: OptimizerConfig | None = None,
    on_record: RecordSink | None = None,
    manifest: RunManifest | None = None,
    allow_untabulated: bool = False,
) -> tuple[list[TrialRecord], TaskSummary]:
    """Train the target of ``task`` from ``init`` until the success target is met."""
    plan = InitPlan.for_task(task, init, pool, allow_untabulated)
    target = task.target_problem()
    setup = TrialSetup(
        hamiltonian=target.hamiltonian,
        plan=plan,
        exact_energy=target.exact_energy,
        success_threshold=task.success_threshold,
        optimizer=optimizer or OptimizerConfig(),
        initial=target.initial_state,
    )
    wanted = target_successes or task.target_successes
    logger.info(
        f"task {task.id} target {target.name} from {plan.label}",
        extra={"task": task.id, "init": plan.label, "seed": master_seed, "successes": wanted},
    )
    records = run_trials(setup, master_seed, wanted, workers, task.max_trials, on_record)
    summary = summarize(records, task.id, plan.label, wanted)
    if manifest is not None:
        summary = summary.model_copy(update={"manifest": manifest})
    return records, summary


def run_base(
    task: TaskSpec,
    master_seed: int,
    target_successes: int | None = None,
    workers: int = 1,
    optimizer: OptimizerConfig | None = None,
    on_record: RecordSink | None = None,
    manifest: RunManifest | None = None,
) -> tuple[list[TrialRecord], ParamPool]:
    """Cold-start the base problem of ``task`` and pool its successful solutions."""
    base = task.base_problem()
    setup = TrialSetup(
        hamiltonian=base.hamiltonian,
        plan=InitPlan.cold(base.circuit()),
        exact_energy=base.exact_energy,
        success_threshold=task.success_threshold,
        optimizer=optimizer or OptimizerConfig(),
        initial=base.initial_state,
    )
    wanted = target_successes or task.target_successes
    logger.info(
        f"task {task.id} base {base.name}",
        extra={"task": task.id, "seed": master_seed, "successes": wanted},
    )
    records = run_trials(setup, master_seed, wanted, workers, task.max_trials, on_record)
    return records, build_pool(task, records, manifest)
