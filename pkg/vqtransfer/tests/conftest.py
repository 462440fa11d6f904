"""Shared fixtures for vqtransfer tests."""

from pathlib import Path

import numpy as np
import pytest
from vqtransfer.config import OptimizerConfig
from vqtransfer.models import build_tfim, hea_problem
from vqtransfer.tasks import TaskSpec


@pytest.fixture(autouse=True)
def _isolated_env(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    """Keep logs, results and config lookups inside the test's tmp dir."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("VQTRANSFER_LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.delenv("VQTRANSFER_OUT_DIR", raising=False)
    monkeypatch.delenv("VQTRANSFER_CHEMISTRY_DIR", raising=False)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def fast_optimizer() -> OptimizerConfig:
    return OptimizerConfig(iter_cap=200)


@pytest.fixture
def tiny_task() -> TaskSpec:
    """Network task on a 2 -> 3 qubit open TFIM; trains in milliseconds.

    Two-qubit HEA blocks only reach product states, hence the loose threshold.
    """
    return TaskSpec(
        id="A",
        title="TFIM 2 -> 3 qubits, HEA, network transfer",
        base=hea_problem("TFIM-2", build_tfim(2, 1.0, 2.0, periodic=False), 2),
        target=hea_problem("TFIM-3", build_tfim(3, 1.0, 2.0, periodic=False), 2),
        transfer_method="network",
        string_length=2,
        allowed_init_strings=("TT", "TR", "RT", "RR"),
        success_threshold=0.5,
        target_successes=2,
        max_trials=40,
    )
