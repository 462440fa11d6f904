"""Results files: append-only trial JSONL, summary/scan/fidelity JSON and manifest-headed CSV."""

from __future__ import annotations

import csv
import json
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path

from pydantic import BaseModel

from vqtransfer.analysis import SUMMARY_CSV_COLUMNS, summary_csv_row
from vqtransfer.logger import logger
from vqtransfer.records import RunManifest, TaskSummary, TrialRecord, VarianceScan

SCAN_CSV_COLUMNS = (
    "n",
    "samples",
    "mean_grad",
    "var_grad",
    "mean_cost",
    "var_cost",
    "stderr_grad",
    "exceedance",
    "chebyshev",
)


class TrialLog:
    """JSONL stream: a ``manifest`` line, then one ``trial`` line per record, flushed each time."""

    def __init__(self, path: Path, manifest: RunManifest):
        self.path = path
        self.count = 0
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(json.dumps({"type": "manifest", **manifest.model_dump(mode="json")}) + "\n")

    def write(self, record: TrialRecord) -> None:
        with open(self.path, "a", encoding="utf-8") as f:
            f.write(json.dumps({"type": "trial", **record.model_dump(mode="json")}) + "\n")
            f.flush()
        self.count += 1


def load_trials(path: Path) -> tuple[RunManifest, list[TrialRecord]]:
    manifest: RunManifest | None = None
    records: list[TrialRecord] = []
    for number, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        entry = json.loads(line)
        kind = entry.pop("type", None)
        if kind == "manifest":
            manifest = RunManifest.model_validate(entry)
        elif kind == "trial":
            records.append(TrialRecord.model_validate(entry))
        else:
            raise ValueError(f"{path}:{number}: unknown entry type {kind!r}")
    if manifest is None:
        raise ValueError(f"{path}: no manifest line")
    return manifest, records


def write_json(path: Path, model: BaseModel) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.debug("wrote json", extra={"path": str(path)})


def write_csv(
    path: Path,
    manifest: RunManifest,
    columns: Sequence[str],
    rows: Iterable[Mapping[str, object]],
) -> None:
    """CSV whose first line is ``# manifest: <json>``, then the header row."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(f"# manifest: {manifest.model_dump_json()}\n")
        writer = csv.DictWriter(f, fieldnames=list(columns), extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    logger.debug("wrote csv", extra={"path": str(path)})


def read_csv(path: Path) -> tuple[RunManifest, list[dict[str, str]]]:
    with open(path, encoding="utf-8", newline="") as f:
        first = f.readline()
        prefix = "# manifest: "
        if not first.startswith(prefix):
            raise ValueError(f"{path}: missing manifest comment line")
        manifest = RunManifest.model_validate_json(first[len(prefix) :])
        return manifest, list(csv.DictReader(f))


def write_summary(stem: Path, summary: TaskSummary) -> tuple[Path, Path]:
    """Write ``<stem>.summary.json`` and the single-row ``<stem>.csv``."""
    if summary.manifest is None:
        raise ValueError("summary has no manifest")
    json_path = stem.with_name(stem.name + ".summary.json")
    csv_path = stem.with_name(stem.name + ".csv")
    write_json(json_path, summary)
    write_csv(csv_path, summary.manifest, SUMMARY_CSV_COLUMNS, [summary_csv_row(summary)])
    return json_path, csv_path


def write_scan(stem: Path, scan: VarianceScan) -> tuple[Path, Path]:
    if scan.manifest is None:
        raise ValueError("scan has no manifest")
    json_path = stem.with_suffix(".json")
    csv_path = stem.with_suffix(".csv")
    write_json(json_path, scan)
    write_csv(csv_path, scan.manifest, SCAN_CSV_COLUMNS, [row.model_dump() for row in scan.rows])
    return json_path, csv_path
