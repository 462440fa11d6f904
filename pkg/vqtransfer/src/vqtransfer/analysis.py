"""Barren-plateau diagnostics, run statistics and ground-state fidelity diagnostics."""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence

import numpy as np

from vqtransfer.ansatz import (
    AnsatzKind,
    CircuitSpec,
    build_hea,
    build_hva,
    evaluate,
)
from vqtransfer.errors import AnalysisError, InvalidSizeError, QubitMismatchError, SizeLimitError
from vqtransfer.logger import logger
from vqtransfer.models import Chain, build_tfim, build_xxz
from vqtransfer.optimize import normalized_grad_norm, value_and_gradient
from vqtransfer.pauli import PauliSum, ground_space
from vqtransfer.records import ScanRow, TaskSummary, TrialRecord, VarianceScan
from vqtransfer.statevector import StateVector, expectation, tensor_product

__all__ = [
    "chebyshev_bound",
    "cost_concentration_scan",
    "fidelity_diagnostics",
    "fit_decay",
    "grouped_hamiltonian",
    "grouped_states",
    "normalized_grad_norm",
    "scan_family",
    "scan_landscape",
    "summarize",
    "summary_csv_row",
    "variance_scan",
]

MAX_SCAN_QUBITS = 10
MIN_SCAN_SAMPLES = 100
MIN_FIT_SIZES = 4

ScanBuilder = Callable[[int], tuple[CircuitSpec, PauliSum]]


# -- run statistics -----------------------------------------------------------


def summarize(
    records: Sequence[TrialRecord], task: str, init: str, target_successes: int
) -> TaskSummary:
    """TTN, iteration statistics over successes, and the per-iteration mean G trace.

    The standard deviation uses divisor N-1; a single success reports 0.0.
    G traces are aligned by iteration index and each tail is averaged over the
    runs still present at that index.
    """
    ordered = sorted(records, key=lambda r: r.trial_index)
    wins = [r for r in ordered if r.success]
    failed = sum(1 for r in ordered if r.failed)
    if not wins:
        return TaskSummary(
            task=task,
            init=init,
            ttn=len(ordered),
            successes=0,
            target_successes=target_successes,
            failed_trials=failed,
            empty=True,
        )
    iterations = np.array([r.iterations for r in wins], dtype=np.float64)
    std = float(np.std(iterations, ddof=1)) if len(wins) > 1 else 0.0

    depth = max(len(r.grad_norm_trace) for r in wins)
    totals = np.zeros(depth)
    counts = np.zeros(depth)
    for r in wins:
        trace = np.asarray(r.grad_norm_trace, dtype=np.float64)
        totals[: trace.size] += trace
        counts[: trace.size] += 1
    mean_trace = (totals / np.maximum(counts, 1)).tolist()

    return TaskSummary(
        task=task,
        init=init,
        ttn=len(ordered),
        successes=len(wins),
        target_successes=target_successes,
        failed_trials=failed,
        mean_iters=float(iterations.mean()),
        std_iters=std,
        mean_grad_norm_trace=mean_trace,
    )


SUMMARY_CSV_COLUMNS = ("task", "string", "TTN", "mean_iters", "std_iters")


def summary_csv_row(summary: TaskSummary) -> dict[str, object]:
    return {
        "task": summary.task,
        "string": summary.init,
        "TTN": summary.ttn,
        "mean_iters": "" if summary.mean_iters is None else summary.mean_iters,
        "std_iters": "" if summary.std_iters is None else summary.std_iters,
    }


# -- landscape scans ----------------------------------------------------------


def chebyshev_bound(variance: float, c: float) -> float:
    """Upper bound ``min(1, Var/c²)`` on ``P(|∂C| ≥ c)`` for a mean-zero derivative."""
    if c <= 0:
        raise AnalysisError(f"Chebyshev threshold must be > 0, got {c}")
    if variance < 0:
        raise AnalysisError(f"variance must be >= 0, got {variance}")
    return min(1.0, variance / (c * c))


def fit_decay(sizes: Sequence[int], variances: Sequence[float]) -> float:
    """Fit ``ln Var = a - n ln p`` by least squares and return ``p``."""
    if len(sizes) != len(variances):
        raise AnalysisError("sizes and variances differ in length")
    if len(sizes) < MIN_FIT_SIZES:
        raise AnalysisError(f"decay fit needs at least {MIN_FIT_SIZES} sizes, got {len(sizes)}")
    values = np.asarray(variances, dtype=np.float64)
    if np.any(values <= 0):
        raise AnalysisError("decay fit needs strictly positive variances")
    slope, _ = np.polyfit(np.asarray(sizes, dtype=np.float64), np.log(values), 1)
    return float(math.exp(-slope))


def _middle_param(circuit: CircuitSpec) -> int:
    # first parameter of the middle layer
    return circuit.index_of(circuit.layers // 2, 0)


def scan_landscape(
    builder: ScanBuilder,
    sizes: Sequence[int],
    samples: int = 500,
    param_index: int | None = None,
    seed: int = 0,
    normalize: bool = False,
    threshold: float = 0.1,
    family: str = "custom",
) -> VarianceScan:
    """Sample uniform parameter vectors at each size and record ∂C and C statistics.

    Draw ``s`` at size ``n`` uses its own generator seeded from ``(seed, n, s)``.
    With ``normalize`` both C and ∂C are divided by the one-norm of H.
    """
    if samples < MIN_SCAN_SAMPLES:
        raise InvalidSizeError(f"scans need at least {MIN_SCAN_SAMPLES} samples, got {samples}")
    if not sizes:
        raise InvalidSizeError("scan needs at least one size")
    if max(sizes) > MAX_SCAN_QUBITS:
        raise SizeLimitError(f"scans are limited to {MAX_SCAN_QUBITS} qubits, got {max(sizes)}")

    rows: list[ScanRow] = []
    for n in sizes:
        circuit, h = builder(n)
        index = _middle_param(circuit) if param_index is None else param_index
        if not 0 <= index < circuit.num_params:
            raise InvalidSizeError(
                f"parameter {index} out of range for {circuit.num_params} at n={n}"
            )
        scale = h.one_norm() if normalize else 1.0
        if scale == 0:
            scale = 1.0
        grads = np.empty(samples)
        costs = np.empty(samples)
        for s in range(samples):
            rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(n, s)))
            params = rng.uniform(-math.pi, math.pi, size=circuit.num_params)
            value, grad = value_and_gradient(circuit, params, h)
            costs[s] = value / scale
            grads[s] = grad[index] / scale
        var_grad = float(np.var(grads, ddof=1))
        rows.append(
            ScanRow(
                n=n,
                samples=samples,
                param_index=index,
                mean_grad=float(grads.mean()),
                var_grad=var_grad,
                stderr_grad=float(math.sqrt(var_grad / samples)),
                mean_cost=float(costs.mean()),
                var_cost=float(np.var(costs, ddof=1)),
                exceedance=float(np.mean(np.abs(grads) >= threshold)),
                chebyshev=chebyshev_bound(var_grad, threshold),
            )
        )
        logger.debug(
            "scan size finished",
            extra={"family": family, "n": n, "var_grad": var_grad, "var_cost": rows[-1].var_cost},
        )

    scan = VarianceScan(
        family=family,
        sizes=list(sizes),
        samples=samples,
        seed=seed,
        normalized=normalize,
        threshold=threshold,
        rows=rows,
    )
    if len(rows) >= MIN_FIT_SIZES:
        grad_vars = [r.var_grad for r in rows]
        cost_vars = [r.var_cost for r in rows]
        update: dict[str, float] = {}
        if all(v > 0 for v in grad_vars):
            update["grad_decay"] = fit_decay(sizes, grad_vars)
        if all(v > 0 for v in cost_vars):
            update["cost_decay"] = fit_decay(sizes, cost_vars)
        scan = scan.model_copy(update=update)
    return scan


def variance_scan(
    builder: ScanBuilder,
    sizes: Sequence[int],
    samples: int = 500,
    param_index: int | None = None,
    seed: int = 0,
    normalize: bool = False,
    threshold: float = 0.1,
    family: str = "custom",
) -> VarianceScan:
    """Gradient-variance scan; the default parameter is the first of the middle layer."""
    return scan_landscape(builder, sizes, samples, param_index, seed, normalize, threshold, family)


def cost_concentration_scan(
    builder: ScanBuilder,
    sizes: Sequence[int],
    samples: int = 500,
    seed: int = 0,
    normalize: bool = True,
    family: str = "custom",
) -> VarianceScan:
    """Cost-variance scan; read ``var_cost`` and ``cost_decay`` from the result."""
    return scan_landscape(builder, sizes, samples, None, seed, normalize, family=family)


SCAN_FAMILIES = ("hea-tfim", "hva-xxz")


def scan_family(name: str, layers: int = 4) -> ScanBuilder:
    """Preset builders: HEA on the TFIM ring (J=1, h=2) or HVA on the XXZ ring (J=1, Δ=2)."""
    if name == "hea-tfim":

        def build(n: int) -> tuple[CircuitSpec, PauliSum]:
            return build_hea(n, layers), build_tfim(n, 1.0, 2.0, periodic=True)

    elif name == "hva-xxz":

        def build(n: int) -> tuple[CircuitSpec, PauliSum]:
            model = build_xxz(Chain(n), 1.0, 2.0, periodic=True)
            return build_hva(model.parts, layers), model.hamiltonian

    else:
        raise InvalidSizeError(f"unknown scan family {name!r}; expected {SCAN_FAMILIES}")
    return build


# -- fidelity diagnostics -----------------------------------------------------


def grouped_hamiltonian(base: PauliSum, copies: int) -> PauliSum:
    """``Σ_k H_base^k`` with copy ``k`` on qubits ``k·n … k·n + n - 1``."""
    if copies < 1:
        raise InvalidSizeError(f"need at least one copy, got {copies}")
    n = base.num_qubits
    total = n * copies
    grouped = base.embed(0, total)
    for k in range(1, copies):
        grouped = grouped + base.embed(k * n, total)
    return grouped


def _group_parts(parts: Sequence[PauliSum], copies: int) -> tuple[PauliSum, ...]:
    return tuple(grouped_hamiltonian(part, copies) for part in parts)


def grouped_states(
    base: CircuitSpec,
    theta_star: Sequence[float] | np.ndarray,
    copies: int,
    base_parts: Sequence[PauliSum] = (),
    target_parts: Sequence[PauliSum] = (),
) -> tuple[StateVector, StateVector]:
    """Return ``U_group(θ*)|0⟩`` and the modified-circuit state ``U_target(θ*)|0⟩``.

    HEA: the grouped circuit keeps one CZ ring per copy, the target circuit has
    a single ring over all qubits; both run θ* on every copy. HVA: the grouped
    circuit evolves the summed copies of the base parts, the target circuit the
    target parts, both with θ*.
    """
    theta = np.asarray(theta_star, dtype=np.float64)
    n = base.num_qubits
    total = n * copies
    if base.kind is AnsatzKind.HEA:
        grouped = build_hea(total, base.layers, segments=[n] * copies)
        target = build_hea(total, base.layers)
        per_layer = 3 * n
        params = np.empty(grouped.num_params)
        for p in range(base.layers):
            for k in range(copies):
                for position in range(per_layer):
                    slot = grouped.index_of(p, k * per_layer + position)
                    params[slot] = theta[base.index_of(p, position)]
        return evaluate(grouped, params), evaluate(target, params)
    if base.kind is AnsatzKind.HVA:
        if not base_parts or not target_parts:
            raise InvalidSizeError("HVA grouping needs the base and target Hamiltonian parts")
        grouped = build_hva(_group_parts(base_parts, copies), base.layers)
        target = build_hva(target_parts, base.layers)
        if target.num_qubits != total:
            raise QubitMismatchError(f"target parts act on {target.num_qubits}, expected {total}")
        return evaluate(grouped, theta), evaluate(target, theta)
    raise InvalidSizeError(f"fidelity grouping supports hea and hva circuits, got {base.kind}")


def _projected_weight(basis: np.ndarray, amplitudes: np.ndarray) -> float:
    overlap = basis.conj().T @ amplitudes
    return float(min(1.0, max(0.0, np.vdot(overlap, overlap).real)))


def fidelity_diagnostics(
    base_states: Sequence[StateVector],
    target_hamiltonian: PauliSum,
    group_hamiltonian: PauliSum,
    transferred: StateVector,
) -> dict[str, float | int]:
    """F1, F2 and F_total for a target built from ``len(base_states)`` grouped subsystems.

    ``ψ_group`` is the tensor product of ``base_states``. Fidelities against the
    target ground state use the projector onto its ground eigenspace, so they
    stay well defined when that space is degenerate. ``f1_spaces`` is the
    largest fidelity between any grouped and any target ground state, and
    ``group_residual`` is ``⟨ψ_group|H_group|ψ_group⟩ - E0(H_group)``.
    """
    if len(base_states) < 2:
        raise InvalidSizeError("fidelity diagnostics need at least two base states")
    group_state = tensor_product(base_states)
    n = group_state.num_qubits
    for name, size in (
        ("target hamiltonian", target_hamiltonian.num_qubits),
        ("grouped hamiltonian", group_hamiltonian.num_qubits),
        ("transferred state", transferred.num_qubits),
    ):
        if size != n:
            raise QubitMismatchError(f"{name} has {size} qubits, grouped state has {n}")

    _, target_basis = ground_space(target_hamiltonian)
    group_energy, group_basis = ground_space(group_hamiltonian)
    psi_group = group_state.amplitudes
    psi_transfer = transferred.amplitudes

    f2 = abs(complex(np.vdot(psi_group, psi_transfer))) ** 2
    singular = np.linalg.svd(target_basis.conj().T @ group_basis, compute_uv=False)
    residual = expectation(group_state, group_hamiltonian) - group_energy
    return {
        "f1": _projected_weight(target_basis, psi_group),
        "f2": float(min(1.0, max(0.0, f2))),
        "f_total": _projected_weight(target_basis, psi_transfer),
        "f1_spaces": float(min(1.0, singular[0] ** 2)) if singular.size else 0.0,
        "target_degeneracy": int(target_basis.shape[1]),
        "group_degeneracy": int(group_basis.shape[1]),
        "group_residual": residual,
    }
