"""vqtransfer: train base circuits, transfer their parameters and diagnose trainability."""

import sys
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated

import numpy as np
import typer
from rich.console import Console
from rich.table import Table

from vqtransfer.analysis import (
    SCAN_FAMILIES,
    fidelity_diagnostics,
    grouped_hamiltonian,
    grouped_states,
    scan_family,
    scan_landscape,
)
from vqtransfer.ansatz import AnsatzKind, evaluate
from vqtransfer.config import CONFIG_TEMPLATE, ConfigValidationError, VQTransferConfig, load_config
from vqtransfer.errors import PoolError, VQTransferError
from vqtransfer.hamiltonian_loader import load_hamiltonian_file
from vqtransfer.initialization import InitPlan
from vqtransfer.logger import logger, setup_logging
from vqtransfer.models import Chain, build_tfim, build_xxz, hea_problem, hva_problem
from vqtransfer.pauli import ground_energy
from vqtransfer.pool import pool_load, pool_save
from vqtransfer.records import FidelityReport, RunManifest
from vqtransfer.results import TrialLog, write_json, write_scan, write_summary
from vqtransfer.tasks import CHEMICAL_ACCURACY, get_task, task_registry, validate_init_string
from vqtransfer.trials import TrialSetup, run_base, run_task, run_trials

app = typer.Typer(help="Transfer-learning parameter initialization for VQE benchmarks.")


@dataclass
class _State:
    config: VQTransferConfig


@app.callback()
def _root(
    ctx: typer.Context,
    config_file: Annotated[
        Path | None,
        typer.Option("--config", help="Extra YAML/JSON config file, merged last"),
    ] = None,
    verbose: Annotated[
        bool, typer.Option("--verbose", "-v", help="Stream DEBUG logs to the terminal")
    ] = False,
) -> None:
    try:
        config = load_config(config_file)
    except ConfigValidationError as exc:
        for problem in exc.problems:
            logger.error("%s", problem)
        raise typer.Exit(code=1) from None
    except VQTransferError as exc:
        logger.error("%s", exc)
        raise typer.Exit(code=1) from None
    setup_logging(
        log_dir=config.logging.log_dir,
        show_level=config.logging.show_level,
        gitignore=config.logging.gitignore,
        verbose=verbose,
    )
    ctx.obj = _State(config)


def _config(ctx: typer.Context) -> VQTransferConfig:
    return ctx.obj.config if isinstance(ctx.obj, _State) else load_config()


@contextmanager
def _reported() -> Iterator[None]:
    """Turn domain and I/O errors into one log line and exit code 1."""
    try:
        yield
    except VQTransferError as exc:
        logger.error("%s", exc)
        raise typer.Exit(code=1) from None
    except OSError as exc:
        where = f" ({exc.filename})" if getattr(exc, "filename", None) else ""
        logger.error("%s%s", exc.strerror or exc, where)
        raise typer.Exit(code=1) from None


def _manifest(config: VQTransferConfig, seed: int | None, **fields) -> RunManifest:
    return RunManifest(
        command=list(sys.argv),
        config=config.model_dump(mode="json"),
        master_seed=seed,
        **fields,
    )


OutOption = Annotated[
    Path | None, typer.Option("--out", help="Output directory (default: config/env)")
]
SeedOption = Annotated[int, typer.Option("--seed", help="Master seed")]
WorkersOption = Annotated[
    int | None, typer.Option("--workers", min=1, help="Parallel trial processes")
]
SuccessesOption = Annotated[
    int | None, typer.Option("--successes", min=1, help="Successful runs to collect")
]


@app.command()
def base(
    ctx: typer.Context,
    task_id: Annotated[str, typer.Argument(help="Task id, A-F")],
    seed: SeedOption = 0,
    successes: SuccessesOption = None,
    workers: WorkersOption = None,
    out: OutOption = None,
) -> None:
    """Cold-start the base circuit of a task and write its parameter pool."""
    config = _config(ctx)
    out_dir = out or config.output_dir
    with _reported():
        task = get_task(task_id, config.tasks)
        manifest = _manifest(config, seed, task=task.id, init="base", boundary=task.boundary)
        log = TrialLog(out_dir / f"base_{task.id}.jsonl", manifest)
        _, pool = run_base(
            task,
            seed,
            successes,
            workers or config.workers,
            config.optimizer,
            on_record=log.write,
            manifest=manifest,
        )
        pool_path = out_dir / f"pool_{task.id}.json"
        pool_save(pool, pool_path)
    logger.info(
        "pool written: %s (%d entries from %d trials)", pool_path, len(pool.entries), log.count
    )


@app.command()
def run(
    ctx: typer.Context,
    task_id: Annotated[str, typer.Argument(help="Task id, A-F")],
    init: Annotated[str, typer.Option("--init", help="T/R string, or BLE where offered")],
    pool_file: Annotated[
        Path | None,
        typer.Option("--pool", help="Parameter pool (default: <out>/pool_<task>.json)"),
    ] = None,
    seed: SeedOption = 0,
    successes: SuccessesOption = None,
    workers: WorkersOption = None,
    out: OutOption = None,
    allow_untabulated: Annotated[
        bool,
        typer.Option(
            "--allow-untabulated", help="Accept T/R strings outside the task's tabulated set"
        ),
    ] = False,
) -> None:
    """Train a target task from one initialization and write trials, summary and CSV row."""
    config = _config(ctx)
    out_dir = out or config.output_dir
    with _reported():
        task = get_task(task_id, config.tasks)
        label = validate_init_string(task, init, allow_untabulated)
        pool = None
        if "T" in label:
            path = pool_file or out_dir / f"pool_{task.id}.json"
            if not path.exists():
                raise PoolError(f"pool file not found: {path}; run `vqtransfer base {task.id}`")
            pool = pool_load(path, expect=task.base_problem().circuit())
        # fail before any output is written
        InitPlan.for_task(task, label, pool, allow_untabulated)
        manifest = _manifest(config, seed, task=task.id, init=label, boundary=task.boundary)
        stem = out_dir / f"{task.id}_{label}_{seed}"
        log = TrialLog(stem.with_name(stem.name + ".jsonl"), manifest)
        _, summary = run_task(
            task,
            label,
            seed,
            successes,
            pool,
            workers or config.workers,
            config.optimizer,
            on_record=log.write,
            allow_untabulated=allow_untabulated,
        )
        summary = summary.model_copy(update={"manifest": manifest.finished()})
        json_path, _ = write_summary(stem, summary)
    if summary.empty:
        logger.warning("no successful runs in %d trials", summary.ttn)
    else:
        logger.info(
            "TTN %d, iterations %.1f ± %.1f", summary.ttn, summary.mean_iters, summary.std_iters
        )
    logger.info("summary written: %s", json_path)


def _sizes(text: str | None, default: list[int]) -> list[int]:
    if text is None:
        return default
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise typer.BadParameter(f"sizes must be comma-separated integers, got {text!r}") from None


@app.command()
def scan(
    ctx: typer.Context,
    family: Annotated[str, typer.Argument(help=f"Circuit family: {' | '.join(SCAN_FAMILIES)}")],
    sizes: Annotated[str | None, typer.Option(help="Comma-separated qubit counts")] = None,
    samples: Annotated[int | None, typer.Option(help="Parameter draws per size")] = None,
    layers: Annotated[int | None, typer.Option(help="Circuit layers")] = None,
    param_index: Annotated[
        int | None, typer.Option(help="Differentiated parameter (default: middle layer)")
    ] = None,
    threshold: Annotated[float, typer.Option(help="c in P(|dC| >= c)")] = 0.1,
    normalize: Annotated[
        bool, typer.Option("--normalize/--raw", help="Divide C and dC by the norm of H")
    ] = True,
    seed: SeedOption = 0,
    out: OutOption = None,
) -> None:
    """Gradient-variance and cost-concentration scans over qubit counts."""
    config = _config(ctx)
    out_dir = out or config.output_dir
    with _reported():
        builder = scan_family(family, layers or config.scan.layers)
        result = scan_landscape(
            builder,
            _sizes(sizes, config.scan.sizes),
            samples or config.scan.samples,
            param_index,
            seed,
            normalize,
            threshold,
            family,
        )
        manifest = _manifest(config, seed).finished()
        json_path, csv_path = write_scan(
            out_dir / f"scan_{family}_{seed}", result.model_copy(update={"manifest": manifest})
        )
    for row in result.rows:
        typer.echo(f"n={row.n:2d}  var_grad={row.var_grad:.6e}  var_cost={row.var_cost:.6e}")
    if result.grad_decay is not None:
        typer.echo(f"gradient decay p = {result.grad_decay:.4f}")
    if result.cost_decay is not None:
        typer.echo(f"cost decay b = {result.cost_decay:.4f}")
    logger.info("scan written: %s, %s", json_path, csv_path)


@app.command()
def exact(
    file: Annotated[Path | None, typer.Option("--file", help="Hamiltonian text file")] = None,
    tfim: Annotated[int | None, typer.Option("--tfim", help="TFIM chain length")] = None,
    xxz: Annotated[int | None, typer.Option("--xxz", help="XXZ chain length")] = None,
    coupling: Annotated[float, typer.Option("--J", help="Coupling J")] = 1.0,
    field: Annotated[float, typer.Option("--h", help="TFIM transverse field h")] = 2.0,
    delta: Annotated[float, typer.Option("--delta", help="XXZ anisotropy")] = 2.0,
    periodic: Annotated[bool, typer.Option("--periodic/--open", help="Boundary")] = True,
) -> None:
    """Print the exact ground energy of a Hamiltonian file or a built-in model."""
    options = (("--file", file), ("--tfim", tfim), ("--xxz", xxz))
    chosen = [name for name, value in options if value is not None]
    if len(chosen) != 1:
        logger.error("give exactly one of --file, --tfim, --xxz")
        raise typer.Exit(code=1)
    with _reported():
        reference = None
        if file is not None:
            loaded = load_hamiltonian_file(file)
            hamiltonian, reference = loaded.hamiltonian, loaded.reference_energy
        elif tfim is not None:
            hamiltonian = build_tfim(tfim, coupling, field, periodic)
        else:
            hamiltonian = build_xxz(Chain(xxz), coupling, delta, periodic).hamiltonian
        energy = ground_energy(hamiltonian)
    typer.echo(repr(energy))
    if reference is not None:
        logger.info("reference energy %r, difference %.3e", reference, abs(energy - reference))


@app.command()
def fidelity(
    ctx: typer.Context,
    ansatz: Annotated[str, typer.Option(help="hea | hva")] = "hva",
    n: Annotated[int, typer.Option("--n", min=2, help="Base subsystem size")] = 4,
    copies: Annotated[int, typer.Option(min=2, help="Number of grouped subsystems")] = 2,
    layers: Annotated[int, typer.Option(min=1, help="Circuit layers")] = 4,
    delta: Annotated[float, typer.Option(help="XXZ anisotropy")] = 2.0,
    seed: SeedOption = 0,
    out: OutOption = None,
) -> None:
    """F1/F2 diagnostics for an open XXZ chain built from trained open-chain halves."""
    config = _config(ctx)
    out_dir = out or config.output_dir
    if ansatz not in ("hea", "hva"):
        logger.error("--ansatz must be hea or hva, got %r", ansatz)
        raise typer.Exit(code=1)
    with _reported():
        base_model = build_xxz(Chain(n), 1.0, delta, periodic=False)
        target_model = build_xxz(Chain(n * copies), 1.0, delta, periodic=False)
        if ansatz == "hea":
            problem = hea_problem(f"XXZ-open-{n}", base_model.hamiltonian, layers)
        else:
            problem = hva_problem(f"XXZ-open-{n}", base_model, layers)
        circuit = problem.circuit()
        setup = TrialSetup(
            hamiltonian=problem.hamiltonian,
            plan=InitPlan.cold(circuit),
            exact_energy=problem.exact_energy,
            success_threshold=CHEMICAL_ACCURACY,
            optimizer=config.optimizer,
        )
        records = run_trials(setup, seed, 1, 1, config.tasks.max_trials or 200)
        winners = [r for r in records if r.success]
        if not winners:
            raise VQTransferError(f"base training found no solution in {len(records)} trials")
        theta = np.asarray(winners[0].final_params)
        base_state = evaluate(circuit, theta)
        _, transferred = grouped_states(
            circuit,
            theta,
            copies,
            base_parts=base_model.parts,
            target_parts=target_model.parts if circuit.kind is AnsatzKind.HVA else (),
        )
        values = fidelity_diagnostics(
            [base_state] * copies,
            target_model.hamiltonian,
            grouped_hamiltonian(base_model.hamiltonian, copies),
            transferred,
        )
        report = FidelityReport(
            ansatz=ansatz,
            base_qubits=n,
            copies=copies,
            layers=layers,
            manifest=_manifest(config, seed, boundary={"chain": "open"}).finished(),
            **values,
        )
        path = out_dir / f"fidelity_{ansatz}_{n * copies}.json"
        write_json(path, report)
    typer.echo(f"F1={report.f1:.10f}  F2={report.f2:.10f}  F_total={report.f_total:.10f}")
    logger.info("fidelity report written: %s", path)


@app.command()
def tasks(ctx: typer.Context) -> None:
    """List the benchmark tasks and their init strings."""
    config = _config(ctx)
    with _reported():
        registry = task_registry(config.tasks)
    table = Table("id", "base", "target", "method", "strings", "status")
    for task in registry:
        base_name = task.base.name if task.base else "-"
        target_name = task.target.name if task.target else "-"
        strings = ", ".join(task.allowed_init_strings + task.comparisons)
        status = "ok" if task.available else f"unavailable: {task.unavailable_reason}"
        table.add_row(task.id, base_name, target_name, task.transfer_method, strings, status)
    Console().print(table)


@app.command()
def config() -> None:
    """Print a template vqtransfer configuration file."""
    typer.echo(CONFIG_TEMPLATE, nl=False)


@app.command()
def docs() -> None:
    """Print the CLI manual."""
    from importlib.resources import files

    content = files("vqtransfer").joinpath("docs", "cli.md").read_text()
    if sys.stdout.isatty():
        from rich.markdown import Markdown

        Console().print(Markdown(content))
    else:
        typer.echo(content)


def main() -> None:
    app()


if __name__ == "__main__":
    main()
