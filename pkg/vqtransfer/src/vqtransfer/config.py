"""vqtransfer configuration: layered YAML merged system → user → project → --config file."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Literal

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from vqtransfer.errors import ConfigurationError


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class LoggingConfig(_Section):
    log_dir: Path | None = None
    show_level: bool = False
    gitignore: bool = True


class OptimizerConfig(_Section):
    iter_cap: int = Field(1000, ge=1)
    grad_tol: float = Field(1e-6, gt=0)
    step_tol: float = Field(1e-10, ge=0)
    wolfe_c1: float = Field(1e-4, gt=0, lt=1)
    wolfe_c2: float = Field(0.9, gt=0, lt=1)
    gradient: Literal["adjoint", "parameter_shift", "finite_difference"] = "adjoint"
    fd_step: float = Field(1e-5, gt=0)

    @model_validator(mode="after")
    def _wolfe_order(self) -> "OptimizerConfig":
        if self.wolfe_c1 >= self.wolfe_c2:
            raise ValueError(f"wolfe_c1 ({self.wolfe_c1}) must be below wolfe_c2 ({self.wolfe_c2})")
        return self


class BoundaryConfig(_Section):
    chain: Literal["periodic", "open"] = "periodic"
    grid: Literal["periodic", "open"] = "open"


class LayerOverride(_Section):
    base: int | None = Field(None, ge=1)
    target: int | None = Field(None, ge=1)


class TasksConfig(_Section):
    boundary: BoundaryConfig = BoundaryConfig()
    layers: dict[str, LayerOverride] = {}
    thresholds: dict[str, float] = {}
    target_successes: int = Field(100, ge=1)
    max_trials: int | None = Field(None, ge=1)
    chemistry_dir: Path = Path("data/chemistry")

    @model_validator(mode="after")
    def _positive_thresholds(self) -> "TasksConfig":
        for task_id, value in self.thresholds.items():
            if value <= 0:
                raise ValueError(f"threshold for task {task_id} must be > 0, got {value}")
        return self


class ScanConfig(_Section):
    samples: int = Field(500, ge=100)
    layers: int = Field(4, ge=1)
    sizes: list[int] = [2, 4, 6, 8, 10]


class VQTransferConfig(_Section):
    logging: LoggingConfig = LoggingConfig()
    optimizer: OptimizerConfig = OptimizerConfig()
    tasks: TasksConfig = TasksConfig()
    scan: ScanConfig = ScanConfig()
    output_dir: Path = Path("results")
    workers: int = Field(1, ge=1)


class ConfigValidationError(ConfigurationError):
    """Config failed validation; ``problems`` holds one message per offending key."""

    def __init__(self, problems: list[str], source: str = "configuration"):
        self.problems = problems
        super().__init__(f"{source}: {len(problems)} problem(s)")


_CONFIG_PATHS = [
    Path("/etc/vqtransfer/config.yaml"),
    Path.home() / ".config" / "vqtransfer" / "config.yaml",
    Path(".vqtransfer.yaml"),
]

CONFIG_TEMPLATE = """\
# vqtransfer configuration
# Place this file at one of:
#   .vqtransfer.yaml                    project-level (current directory)
#   ~/.config/vqtransfer/config.yaml    user-level
#   /etc/vqtransfer/config.yaml         system-level
# or pass it explicitly with --config (JSON works too).
#
# Higher-precedence files override lower ones.
# Environment variables (or a .env file) override everything.

logging:
  # Directory for debug JSON log files.
  # Default: ~/.local/share/vqtransfer/logs   Env: VQTRANSFER_LOG_DIR
  # log_dir: ~/.local/share/vqtransfer/logs
  # show_level: false
  # gitignore: true

optimizer:
  # BFGS stops at max|grad| < grad_tol, a parameter step below step_tol,
  # or after iter_cap iterations. Line search uses strong Wolfe c1/c2.
  # iter_cap: 1000
  # grad_tol: 1.0e-6
  # step_tol: 1.0e-10
  # wolfe_c1: 1.0e-4
  # wolfe_c2: 0.9
  # Gradient used for training: adjoint | parameter_shift | finite_difference.
  # fd_step is the central-difference step of finite_difference.
  # gradient: adjoint
  # fd_step: 1.0e-5

tasks:
  # boundary:
  #   chain: periodic     # periodic | open
  #   grid: open          # periodic | open
  # layers:
  #   D: {base: 4, target: 8}
  # thresholds:
  #   A: 1.6e-3
  # target_successes: 100
  # max_trials: 5000
  # Env: VQTRANSFER_CHEMISTRY_DIR
  # chemistry_dir: data/chemistry

scan:
  # samples: 500
  # layers: 4
  # sizes: [2, 4, 6, 8, 10]

# Env: VQTRANSFER_OUT_DIR
# output_dir: results
# workers: 1
"""


def _deep_merge(base: dict, override: dict) -> dict:
    result = dict(base)
    for key, value in override.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = _deep_merge(result[key], value)
        else:
            result[key] = value
    return result


def _read(path: Path) -> dict[str, Any]:
    try:
        raw = yaml.safe_load(path.read_text()) or {}
    except yaml.YAMLError as exc:
        raise ConfigValidationError([f"{path}: {exc}"], str(path)) from None
    if not isinstance(raw, dict):
        raise ConfigValidationError([f"{path}: top level must be a mapping"], str(path))
    # sections left with only comments load as null
    return {key: value for key, value in raw.items() if value is not None}


def validate_config(raw: dict[str, Any]) -> list[str]:
    """Return one message per problem; an empty list means ``raw`` is valid."""
    try:
        VQTransferConfig.model_validate(raw)
    except ValidationError as exc:
        return [
            f"{'.'.join(str(part) for part in err['loc']) or '<root>'}: {err['msg']}"
            for err in exc.errors()
        ]
    return []


def load_config(extra_path: Path | None = None) -> VQTransferConfig:
    """Merge configs from system → user → project → ``extra_path``, then apply env overrides."""
    load_dotenv()
    merged: dict[str, Any] = {}
    for path in _CONFIG_PATHS:
        if path.exists():
            merged = _deep_merge(merged, _read(path))
    if extra_path is not None:
        if not extra_path.exists():
            raise ConfigurationError(f"config file not found: {extra_path}")
        merged = _deep_merge(merged, _read(extra_path))

    if problems := validate_config(merged):
        raise ConfigValidationError(problems)
    config = VQTransferConfig.model_validate(merged)

    if log_dir := os.environ.get("VQTRANSFER_LOG_DIR"):
        config.logging.log_dir = Path(log_dir)
    if out_dir := os.environ.get("VQTRANSFER_OUT_DIR"):
        config.output_dir = Path(out_dir)
    if chemistry_dir := os.environ.get("VQTRANSFER_CHEMISTRY_DIR"):
        config.tasks.chemistry_dir = Path(chemistry_dir)

    return config
