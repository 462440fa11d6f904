"""Pydantic schemas for everything written to disk: manifests, trials, summaries, pools, scans."""

from __future__ import annotations

import math
from datetime import UTC, datetime
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from vqtransfer import __version__

POOL_VERSION = 1
RANDOM_RANGE = "[-pi, pi)"


def utc_now() -> str:
    return datetime.now(UTC).isoformat(timespec="seconds")


class _Record(BaseModel):
    model_config = ConfigDict(extra="forbid")


class RunManifest(_Record):
    """Provenance embedded in every results file.

    Two runs with equal manifests (ignoring ``started_at``/``finished_at``)
    produce identical results.
    """

    command: list[str]
    config: dict[str, Any] = {}
    master_seed: int | None = None
    code_version: str = __version__
    task: str | None = None
    init: str | None = None
    boundary: dict[str, str] = {}
    random_range: str = RANDOM_RANGE
    started_at: str = Field(default_factory=utc_now)
    finished_at: str | None = None

    def finished(self) -> RunManifest:
        return self.model_copy(update={"finished_at": utc_now()})


class TrialRecord(_Record):
    trial_index: int = Field(ge=0)
    init: str
    seed: int
    initial_params: list[float]
    final_params: list[float]
    final_energy: float | None
    exact_energy: float
    success_threshold: float = Field(gt=0)
    iterations: int = Field(ge=0)
    converged: bool
    success: bool
    failed: bool = False
    grad_norm_trace: list[float] = []
    energy_trace: list[float] = []
    wall_time: float = 0.0
    message: str = ""

    @model_validator(mode="after")
    def _success_within_threshold(self) -> TrialRecord:
        if self.success:
            if self.failed or self.final_energy is None:
                raise ValueError("a failed trial cannot be a success")
            if abs(self.final_energy - self.exact_energy) >= self.success_threshold:
                raise ValueError(
                    f"success requires |final - exact| < {self.success_threshold}, got "
                    f"{abs(self.final_energy - self.exact_energy)}"
                )
        return self

    @property
    def error(self) -> float:
        if self.final_energy is None:
            return math.inf
        return abs(self.final_energy - self.exact_energy)

    def deterministic_view(self) -> dict[str, Any]:
        """Every field except ``wall_time``, the only one allowed to vary between reruns."""
        return self.model_dump(exclude={"wall_time"})


class TaskSummary(_Record):
    """Aggregate of one run; ``empty`` marks a run with zero successes."""

    task: str
    init: str
    ttn: int
    successes: int
    target_successes: int
    failed_trials: int = 0
    empty: bool = False
    mean_iters: float | None = None
    std_iters: float | None = None
    mean_grad_norm_trace: list[float] = []
    manifest: RunManifest | None = None


class PoolEntry(_Record):
    seed: int
    energy: float
    params: list[float]


class ParamPool(_Record):
    version: int = POOL_VERSION
    task: str
    ansatz: str
    n: int = Field(ge=1)
    layers: int = Field(ge=1)
    num_params: int = Field(ge=1)
    exact_energy: float
    success_threshold: float = Field(gt=0)
    entries: list[PoolEntry] = []
    manifest: RunManifest | None = None

    @model_validator(mode="after")
    def _entries_match(self) -> ParamPool:
        for i, entry in enumerate(self.entries):
            if len(entry.params) != self.num_params:
                raise ValueError(
                    f"entry {i} has {len(entry.params)} params, pool expects {self.num_params}"
                )
            if abs(entry.energy - self.exact_energy) >= self.success_threshold:
                raise ValueError(f"entry {i} energy {entry.energy} misses the success threshold")
        return self


class ScanRow(_Record):
    n: int
    samples: int
    param_index: int
    mean_grad: float
    var_grad: float
    stderr_grad: float
    mean_cost: float
    var_cost: float
    exceedance: float
    chebyshev: float


class VarianceScan(_Record):
    """Gradient and cost statistics over uniform parameter draws, one row per size.

    ``grad_decay``/``cost_decay`` are the fitted factors ``p``/``b`` of
    ``Var ∝ p^{-n}``; ``None`` when fewer than four sizes were scanned.
    """

    family: str
    sizes: list[int]
    samples: int
    seed: int
    normalized: bool
    threshold: float
    rows: list[ScanRow]
    grad_decay: float | None = None
    cost_decay: float | None = None
    manifest: RunManifest | None = None


class FidelityReport(_Record):
    ansatz: Literal["hea", "hva"]
    base_qubits: int
    copies: int
    layers: int
    f1: float
    f2: float
    f_total: float
    f1_spaces: float
    target_degeneracy: int
    group_degeneracy: int
    group_residual: float
    manifest: RunManifest | None = None
