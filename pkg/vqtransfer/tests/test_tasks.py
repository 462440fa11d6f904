"""Tests for the benchmark task registry and init-string validation."""

import logging
from pathlib import Path

import numpy as np
import pytest
from vqtransfer.ansatz import AnsatzKind
from vqtransfer.config import BoundaryConfig, LayerOverride, TasksConfig
from vqtransfer.errors import ConfigurationError, TransferError
from vqtransfer.hamiltonian_loader import save_hamiltonian_file
from vqtransfer.models import build_tfim
from vqtransfer.tasks import (
    BLE,
    CHEMICAL_ACCURACY,
    TASK_IDS,
    TaskSpec,
    get_task,
    task_registry,
    validate_init_string,
)

from tests.oracles import naive_dense


def test_registry_lists_all_tasks_in_order() -> None:
    tasks = task_registry()
    assert tuple(t.id for t in tasks) == TASK_IDS
    for task in tasks:
        assert set(task.reference_ttn) == set(task.allowed_init_strings) | set(task.comparisons)
        assert task.success_threshold == CHEMICAL_ACCURACY
        assert task.target_successes == 100


def test_network_tasks() -> None:
    a = get_task("a")
    assert a.transfer_method == "network"
    assert a.string_length == 3
    assert a.base_problem().num_qubits == 4
    assert a.target_problem().num_qubits == 6
    circuit = a.target_circuit()
    assert circuit.kind is AnsatzKind.NETWORK
    assert circuit.copies == 3
    assert circuit.num_params == 3 * 48

    b = get_task("B")
    assert b.string_length == 5
    assert b.target_circuit().copies == 5


def test_hva_tasks() -> None:
    d = get_task("D")
    assert d.base_problem().circuit().num_params == 12
    assert d.target_problem().circuit().num_params == 24
    assert d.target_circuit().kind is AnsatzKind.HVA
    f = get_task("F")
    assert f.target_circuit().kind is AnsatzKind.HVA_VARIANT
    assert f.comparisons == (BLE,)


def test_grid_task_defaults_to_open_boundary() -> None:
    e = get_task("E")
    assert e.boundary == {"chain": "periodic", "grid": "open"}
    target = e.target_problem()
    assert target.num_qubits == 8
    assert target.layers == 8
    # 10 bonds, three terms each
    assert len(target.hamiltonian) == 30


def test_chemistry_task_unavailable_without_files() -> None:
    c = get_task("C")
    assert not c.available
    assert "h2.txt" in c.unavailable_reason
    with pytest.raises(ConfigurationError):
        c.base_problem()


def test_chemistry_task_reads_files(tmp_path: Path) -> None:
    save_hamiltonian_file(tmp_path / "h2.txt", build_tfim(4), -1.1)
    save_hamiltonian_file(tmp_path / "h3.txt", build_tfim(6), -1.6)
    c = get_task("C", TasksConfig(chemistry_dir=tmp_path))
    assert c.available
    assert c.base_problem().reference_energy == -1.1
    assert c.base_problem().circuit().num_params == 48
    assert c.target_problem().layers == 8


@pytest.mark.parametrize("chain", ["periodic", "open"])
def test_every_task_hamiltonian_diagonalizes(tmp_path: Path, chain: str) -> None:
    save_hamiltonian_file(tmp_path / "h2.txt", build_tfim(4), -1.1)
    save_hamiltonian_file(tmp_path / "h3.txt", build_tfim(6), -1.6)
    config = TasksConfig(boundary=BoundaryConfig(chain=chain), chemistry_dir=tmp_path)
    for task in task_registry(config):
        for problem in (task.base_problem(), task.target_problem()):
            assert problem.num_qubits <= 8
            expected = np.linalg.eigvalsh(naive_dense(problem.hamiltonian))[0]
            assert problem.exact_energy == pytest.approx(expected, abs=1e-9), task.id


def test_config_overrides() -> None:
    config = TasksConfig(
        boundary=BoundaryConfig(chain="open"),
        layers={"D": LayerOverride(base=2, target=6)},
        thresholds={"A": 0.01},
        target_successes=7,
        max_trials=50,
    )
    d = get_task("D", config)
    assert (d.base_problem().layers, d.target_problem().layers) == (2, 6)
    assert d.boundary == {"chain": "open"}
    a = get_task("A", config)
    assert a.success_threshold == 0.01
    assert a.target_successes == 7
    assert a.max_trials == 50
    # open 4-site TFIM: 3 bonds + 4 fields
    assert len(a.base_problem().hamiltonian) == 7


def test_validate_init_string(caplog: pytest.LogCaptureFixture) -> None:
    a = get_task("A")
    assert validate_init_string(a, " ttt ") == "TTT"
    with pytest.raises(TransferError, match="not tabulated for task A"):
        validate_init_string(a, "TRT")
    with caplog.at_level(logging.WARNING, logger="vqtransfer"):
        assert validate_init_string(a, "TRT", allow_untabulated=True) == "TRT"
    assert "not one of the tabulated" in caplog.text

    for bad in ("TT", "TXT", "", BLE):
        with pytest.raises(TransferError):
            validate_init_string(a, bad)
    assert validate_init_string(get_task("F"), "ble") == BLE


def test_unknown_task() -> None:
    with pytest.raises(ConfigurationError, match="unknown task"):
        get_task("Z")


def test_task_spec_validation() -> None:
    with pytest.raises(ConfigurationError):
        TaskSpec(
            id="X",
            title="bad",
            base=None,
            target=None,
            transfer_method="structure",
            string_length=2,
            allowed_init_strings=("TTT",),
        )
