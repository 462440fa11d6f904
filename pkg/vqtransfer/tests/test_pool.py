"""Tests for parameter pools."""

import json
from pathlib import Path

import numpy as np
import pytest
from vqtransfer.ansatz import build_hea
from vqtransfer.errors import PoolError
from vqtransfer.pool import build_pool, check_shape, pool_draw, pool_load, pool_save
from vqtransfer.records import ParamPool, PoolEntry, TrialRecord
from vqtransfer.tasks import TaskSpec


def record(index: int, energy: float, success: bool, num_params: int) -> TrialRecord:
    return TrialRecord(
        trial_index=index,
        init="R",
        seed=100 + index,
        initial_params=[0.0] * num_params,
        final_params=[float(index)] * num_params,
        final_energy=energy,
        exact_energy=-4.123,
        success_threshold=0.5,
        iterations=10,
        converged=True,
        success=success,
    )


def make_pool(entries: int = 4) -> ParamPool:
    return ParamPool(
        task="A",
        ansatz="hea",
        n=2,
        layers=1,
        num_params=6,
        exact_energy=-1.0,
        success_threshold=0.1,
        entries=[PoolEntry(seed=i, energy=-1.0, params=[i * 0.5] * 6) for i in range(entries)],
    )


def test_build_pool_keeps_successes(tiny_task: TaskSpec) -> None:
    L = tiny_task.base_problem().circuit().num_params
    records = [
        record(2, -4.0, True, L),
        record(0, -3.0, False, L),
        record(1, -3.9, True, L),
    ]
    pool = build_pool(tiny_task, records)
    assert [e.seed for e in pool.entries] == [101, 102]
    assert pool.ansatz == "hea"
    assert (pool.n, pool.layers, pool.num_params) == (2, 2, L)
    check_shape(pool, tiny_task.base_problem().circuit())


def test_save_load_roundtrip(tmp_path: Path) -> None:
    pool = make_pool()
    path = tmp_path / "pool.json"
    pool_save(pool, path)
    loaded = pool_load(path, expect=build_hea(2, 1))
    assert loaded == pool
    again = tmp_path / "again.json"
    pool_save(loaded, again)
    assert path.read_bytes() == again.read_bytes()


def test_load_rejects_version(tmp_path: Path) -> None:
    raw = json.loads(make_pool().model_dump_json())
    raw["version"] = 99
    path = tmp_path / "pool.json"
    path.write_text(json.dumps(raw))
    with pytest.raises(PoolError, match="version"):
        pool_load(path)


def test_load_rejects_shape(tmp_path: Path) -> None:
    path = tmp_path / "pool.json"
    pool_save(make_pool(), path)
    with pytest.raises(PoolError):
        pool_load(path, expect=build_hea(3, 1))


def test_load_rejects_garbage(tmp_path: Path) -> None:
    path = tmp_path / "pool.json"
    path.write_text("{not json")
    with pytest.raises(PoolError):
        pool_load(path)
    raw = json.loads(make_pool().model_dump_json())
    raw["entries"][0]["params"] = [0.0]
    path.write_text(json.dumps(raw))
    with pytest.raises(PoolError, match="entry 0"):
        pool_load(path)


def test_pool_rejects_entries_outside_threshold() -> None:
    with pytest.raises(ValueError):
        ParamPool(
            task="A",
            ansatz="hea",
            n=2,
            layers=1,
            num_params=1,
            exact_energy=-1.0,
            success_threshold=0.1,
            entries=[PoolEntry(seed=0, energy=-0.5, params=[0.0])],
        )


def test_draw_is_seeded() -> None:
    pool = make_pool()
    a = [pool_draw(pool, np.random.default_rng(9)).seed for _ in range(3)]
    b = [pool_draw(pool, np.random.default_rng(9)).seed for _ in range(3)]
    assert a == b
    with pytest.raises(PoolError):
        pool_draw(make_pool(0), np.random.default_rng(0))


def test_draws_are_uniform() -> None:
    pool = make_pool(4)
    rng = np.random.default_rng(2024)
    counts = np.zeros(4)
    for _ in range(10_000):
        counts[pool_draw(pool, rng).seed] += 1
    expected = 10_000 / 4
    sigma = np.sqrt(10_000 * 0.25 * 0.75)
    assert np.all(np.abs(counts - expected) < 4 * sigma)
