"""End-to-end tests for the vqtransfer command line."""

import json
import logging
from pathlib import Path

import pytest
from typer.testing import CliRunner
from vqtransfer.cli import app
from vqtransfer.config import CONFIG_TEMPLATE
from vqtransfer.hamiltonian_loader import save_hamiltonian_file
from vqtransfer.models import build_tfim
from vqtransfer.results import load_trials, read_csv

runner = CliRunner()


def test_docs_prints_reference() -> None:
    result = runner.invoke(app, ["docs"])
    assert result.exit_code == 0
    assert "vqtransfer — command reference" in result.output


def test_config_prints_template() -> None:
    result = runner.invoke(app, ["config"])
    assert result.exit_code == 0
    assert result.output == CONFIG_TEMPLATE


def test_tasks_lists_registry() -> None:
    result = runner.invoke(app, ["tasks"])
    assert result.exit_code == 0
    assert "TFIM" in result.output
    assert "XXZ" in result.output


def test_exact_tfim_without_field() -> None:
    result = runner.invoke(app, ["exact", "--tfim", "4", "--J", "1", "--h", "0", "--periodic"])
    assert result.exit_code == 0
    assert float(result.output.strip()) == pytest.approx(-4.0, abs=1e-10)


def test_exact_open_xxz_pair() -> None:
    result = runner.invoke(app, ["exact", "--xxz", "2", "--open"])
    assert result.exit_code == 0
    assert float(result.output.strip()) == pytest.approx(-2.0, abs=1e-10)


def test_exact_from_file(tmp_path: Path) -> None:
    path = tmp_path / "tfim3.txt"
    save_hamiltonian_file(path, build_tfim(3, 1.0, 2.0, periodic=False))
    result = runner.invoke(app, ["exact", "--file", str(path)])
    assert result.exit_code == 0
    assert float(result.output.splitlines()[0]) < -6.0


@pytest.mark.parametrize(
    "args",
    [
        ["exact"],
        ["exact", "--tfim", "4", "--xxz", "4"],
        ["exact", "--file", "missing.txt"],
    ],
)
def test_exact_rejects_bad_sources(args: list[str]) -> None:
    assert runner.invoke(app, args).exit_code == 1


def test_exact_rejects_malformed_file(tmp_path: Path) -> None:
    path = tmp_path / "bad.txt"
    path.write_text("# qubits: 2\n1.0 ZQ\n")
    assert runner.invoke(app, ["exact", "--file", str(path)]).exit_code == 1


def test_exact_reports_undecodable_file(
    tmp_path: Path, caplog: pytest.LogCaptureFixture
) -> None:
    path = tmp_path / "latin1.txt"
    path.write_bytes(b"# qubits: 2\n1.0 Z\xffZ\n")
    with caplog.at_level(logging.ERROR, logger="vqtransfer"):
        result = runner.invoke(app, ["exact", "--file", str(path)])
    assert result.exit_code == 1
    assert isinstance(result.exception, SystemExit)
    assert f"{path}:2: not valid UTF-8 at byte 16" in caplog.text


def test_missing_config_file_exits(tmp_path: Path) -> None:
    result = runner.invoke(app, ["--config", str(tmp_path / "nope.yaml"), "tasks"])
    assert result.exit_code == 1


def test_invalid_config_file_exits(tmp_path: Path) -> None:
    path = tmp_path / "bad.yaml"
    path.write_text("optimizer:\n  iter_cap: -3\n")
    result = runner.invoke(app, ["--config", str(path), "tasks"])
    assert result.exit_code == 1


def test_run_unknown_task() -> None:
    assert runner.invoke(app, ["run", "Z", "--init", "TT"]).exit_code == 1


def test_run_rejects_bad_string(tmp_path: Path) -> None:
    out = tmp_path / "out"
    result = runner.invoke(app, ["run", "A", "--init", "TXT", "--out", str(out)])
    assert result.exit_code == 1
    assert not out.exists()


def test_run_untabulated_string_needs_flag(
    tmp_path: Path, caplog: pytest.LogCaptureFixture
) -> None:
    out = tmp_path / "out"
    args = ["run", "A", "--init", "TRT", "--out", str(out)]
    with caplog.at_level(logging.ERROR, logger="vqtransfer"):
        assert runner.invoke(app, args).exit_code == 1
    assert "not tabulated for task A" in caplog.text
    caplog.clear()
    with caplog.at_level(logging.ERROR, logger="vqtransfer"):
        assert runner.invoke(app, [*args, "--allow-untabulated"]).exit_code == 1
    assert "not tabulated" not in caplog.text
    assert "pool file not found" in caplog.text
    assert not out.exists()


def test_run_transfer_without_pool(tmp_path: Path) -> None:
    out = tmp_path / "out"
    result = runner.invoke(app, ["run", "D", "--init", "TR", "--out", str(out)])
    assert result.exit_code == 1
    assert not out.exists()


def test_scan_writes_results(tmp_path: Path) -> None:
    result = runner.invoke(
        app,
        [
            "scan",
            "hea-tfim",
            "--sizes",
            "2,3",
            "--samples",
            "100",
            "--layers",
            "1",
            "--seed",
            "3",
            "--out",
            str(tmp_path),
        ],
    )
    assert result.exit_code == 0
    assert "n= 2" in result.output and "n= 3" in result.output
    data = json.loads((tmp_path / "scan_hea-tfim_3.json").read_text())
    assert data["sizes"] == [2, 3]
    assert data["normalized"] is True
    manifest, rows = read_csv(tmp_path / "scan_hea-tfim_3.csv")
    assert manifest.master_seed == 3
    assert [row["n"] for row in rows] == ["2", "3"]


def test_scan_rejects_bad_input(tmp_path: Path) -> None:
    base = ["scan", "hea-tfim", "--samples", "100", "--out", str(tmp_path)]
    assert runner.invoke(app, [*base, "--sizes", "2,x"]).exit_code == 2
    assert runner.invoke(app, [*base, "--sizes", "2,12"]).exit_code == 1
    assert runner.invoke(app, ["scan", "qaoa", "--sizes", "2"]).exit_code == 1
    too_few = ["scan", "hea-tfim", "--sizes", "2", "--samples", "10"]
    assert runner.invoke(app, too_few).exit_code == 1


def test_fidelity_report(tmp_path: Path) -> None:
    result = runner.invoke(
        app,
        ["fidelity", "--ansatz", "hea", "--n", "2", "--copies", "2", "--layers", "2"]
        + ["--out", str(tmp_path)],
    )
    assert result.exit_code == 0
    assert "F1=" in result.output and "F_total=" in result.output
    report = json.loads((tmp_path / "fidelity_hea_4.json").read_text())
    assert report["base_qubits"] == 2
    assert report["copies"] == 2
    assert 0.0 <= report["f_total"] <= 1.0


def test_fidelity_rejects_unknown_ansatz(tmp_path: Path) -> None:
    result = runner.invoke(app, ["fidelity", "--ansatz", "qaoa", "--out", str(tmp_path)])
    assert result.exit_code == 1


@pytest.mark.slow
def test_base_then_run(tmp_path: Path) -> None:
    config = tmp_path / "small.yaml"
    config.write_text("tasks:\n  target_successes: 2\n  max_trials: 200\n")
    out = tmp_path / "out"
    common = ["--config", str(config)]

    result = runner.invoke(app, [*common, "base", "D", "--seed", "1", "--out", str(out)])
    assert result.exit_code == 0
    pool = json.loads((out / "pool_D.json").read_text())
    assert len(pool["entries"]) == 2
    _, base_records = load_trials(out / "base_D.jsonl")
    assert sum(r.success for r in base_records) == 2

    result = runner.invoke(
        app, [*common, "run", "D", "--init", "TR", "--seed", "5", "--out", str(out)]
    )
    assert result.exit_code == 0
    summary = json.loads((out / "D_TR_5.summary.json").read_text())
    assert summary["successes"] == 2
    assert summary["manifest"]["finished_at"] is not None
    _, rows = read_csv(out / "D_TR_5.csv")
    assert rows[0]["string"] == "TR"
    assert int(rows[0]["TTN"]) == summary["ttn"]
