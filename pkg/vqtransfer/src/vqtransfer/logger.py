"""vqtransfer logging: INFO to stderr via rich, DEBUG to a JSON-lines file.

Structured fields travel in ``extra=``; the console shows only the message, the
log file keeps every field. numpy scalars and arrays are written as plain JSON.
"""

import json
import logging
import os
import time
from pathlib import Path

import numpy as np
from rich.console import Console
from rich.logging import RichHandler

LOGGER_NAME = "vqtransfer"
DEFAULT_LOG_DIR = Path.home() / ".local" / "share" / "vqtransfer" / "logs"

# attributes every LogRecord carries; anything else came in through ``extra=``
_RESERVED = frozenset(vars(logging.LogRecord("", 0, "", 0, "", (), None))) | {
    "message",
    "asctime",
    "taskName",
}


def _plain(value: object) -> object:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    return repr(value)


class _JsonFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        entry: dict[str, object] = {
            "ts": self.formatTime(record, self.datefmt),
            "level": record.levelname,
            "logger": record.name,
            "msg": record.getMessage(),
        }
        entry.update(
            (key, value)
            for key, value in vars(record).items()
            if key not in _RESERVED and not key.startswith("_")
        )
        if record.exc_info:
            entry["exception"] = self.formatException(record.exc_info)
        return json.dumps(entry, default=_plain)


def _reset(target: logging.Logger) -> None:
    for handler in list(target.handlers):
        target.removeHandler(handler)
        handler.close()


def setup_logging(
    log_dir: Path | None = None,
    show_level: bool = False,
    gitignore: bool = True,
    verbose: bool = False,
) -> Path:
    """Attach the console and file handlers, replacing earlier ones; returns the log file."""
    directory = (log_dir or DEFAULT_LOG_DIR).expanduser()
    directory.mkdir(parents=True, exist_ok=True)
    ignore = directory / ".gitignore"
    if gitignore and not ignore.exists():
        ignore.write_text("*\n")

    target = logging.getLogger(LOGGER_NAME)
    target.setLevel(logging.DEBUG)
    _reset(target)

    console = RichHandler(
        console=Console(stderr=True),
        level=logging.DEBUG if verbose else logging.INFO,
        show_path=False,
        show_time=False,
        show_level=show_level,
        markup=False,
    )
    log_file = directory / f"{LOGGER_NAME}_{int(time.time())}_{os.getpid()}.log"
    jsonl = logging.FileHandler(log_file, encoding="utf-8")
    jsonl.setLevel(logging.DEBUG)
    jsonl.setFormatter(_JsonFormatter())

    target.addHandler(console)
    target.addHandler(jsonl)
    return log_file


logger = logging.getLogger(LOGGER_NAME)
