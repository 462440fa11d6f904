"""Tests for the vqtransfer logging setup."""

import json
import logging
from pathlib import Path

import numpy as np
import pytest
from vqtransfer.logger import LOGGER_NAME, logger, setup_logging


@pytest.fixture
def log_dir(tmp_path: Path) -> Path:
    return tmp_path / "logs"


def _entries(log_file: Path) -> list[dict]:
    for handler in logging.getLogger(LOGGER_NAME).handlers:
        handler.flush()
    return [json.loads(line) for line in log_file.read_text().splitlines()]


def test_one_log_file_per_setup(log_dir: Path) -> None:
    log_file = setup_logging(log_dir=log_dir)
    assert list(log_dir.glob("vqtransfer_*.log")) == [log_file]


@pytest.mark.parametrize(
    ("existing", "enabled", "expected"),
    [
        (None, True, "*\n"),
        (None, False, None),
        ("custom\n", True, "custom\n"),
    ],
)
def test_gitignore_handling(
    log_dir: Path, existing: str | None, enabled: bool, expected: str | None
) -> None:
    ignore = log_dir / ".gitignore"
    if existing is not None:
        log_dir.mkdir(parents=True)
        ignore.write_text(existing)
    setup_logging(log_dir=log_dir, gitignore=enabled)
    assert (ignore.read_text() if ignore.exists() else None) == expected


def test_setup_replaces_handlers(tmp_path: Path) -> None:
    setup_logging(log_dir=tmp_path / "first")
    setup_logging(log_dir=tmp_path / "second")
    assert len(logging.getLogger(LOGGER_NAME).handlers) == 2


def test_messages_reach_caplog(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level(logging.INFO, logger=LOGGER_NAME):
        logger.info("pool written")
    assert "pool written" in caplog.text


def test_file_gets_debug_records_as_json(log_dir: Path) -> None:
    log_file = setup_logging(log_dir=log_dir)
    logger.debug(
        "trial finished",
        extra={"trial": 3, "energy": np.float64(-4.5), "params": np.array([0.5, 1.5])},
    )
    (entry,) = [e for e in _entries(log_file) if e["msg"] == "trial finished"]
    assert entry["level"] == "DEBUG"
    assert entry["logger"] == LOGGER_NAME
    assert entry["trial"] == 3
    assert entry["energy"] == -4.5
    assert entry["params"] == [0.5, 1.5]
    assert "lineno" not in entry


def test_file_records_exceptions(log_dir: Path) -> None:
    log_file = setup_logging(log_dir=log_dir)
    try:
        raise RuntimeError("line search failed")
    except RuntimeError:
        logger.exception("trial crashed")
    (entry,) = [e for e in _entries(log_file) if e["msg"] == "trial crashed"]
    assert "line search failed" in entry["exception"]
