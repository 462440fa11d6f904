"""Cost, exact gradients and BFGS training on the state-vector simulator."""

from __future__ import annotations

import functools
import math
from collections import OrderedDict
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.optimize

from vqtransfer.ansatz import (
    CircuitSpec,
    GateKind,
    apply_gate_inplace,
    check_params,
    evaluate_buffer,
)
from vqtransfer.config import OptimizerConfig
from vqtransfer.errors import AnalysisError, GradientMethodError, QubitMismatchError
from vqtransfer.logger import logger
from vqtransfer.pauli import PauliSum, PauliTerm
from vqtransfer.statevector import (
    StateVector,
    expectation_buffer,
    hamiltonian_apply,
    pauli_apply,
    real_part,
)

GradientMethod = Literal["adjoint", "parameter_shift", "finite_difference"]

_HALF_PI = math.pi / 2


def _check_hamiltonian(circuit: CircuitSpec, h: PauliSum) -> None:
    if h.num_qubits != circuit.num_qubits:
        raise QubitMismatchError(
            f"hamiltonian has {h.num_qubits} qubits, circuit has {circuit.num_qubits}"
        )


def cost(
    circuit: CircuitSpec,
    params: Sequence[float] | np.ndarray,
    h: PauliSum,
    initial: StateVector | None = None,
) -> float:
    """``⟨ψ(θ)|H|ψ(θ)⟩`` with ``ψ(θ) = U(θ)|initial⟩``."""
    _check_hamiltonian(circuit, h)
    psi = evaluate_buffer(circuit, params, initial)
    return expectation_buffer(psi, circuit.num_qubits, h)


@functools.lru_cache(maxsize=256)
def _rotation_term(qubit: int, axis: str) -> PauliTerm:
    return PauliTerm(1.0, ((qubit, axis),))


def _generator_apply(psi: np.ndarray, n: int, kind: GateKind, gate_term: PauliTerm) -> np.ndarray:
    # dU/dθ = -i G U with G = P/2 for rotations and G = c·P for PauliExp
    if kind is GateKind.PAULI_EXP:
        return gate_term.coefficient * pauli_apply(psi, n, gate_term)
    return 0.5 * pauli_apply(psi, n, gate_term)


def value_and_gradient(
    circuit: CircuitSpec,
    params: Sequence[float] | np.ndarray,
    h: PauliSum,
    initial: StateVector | None = None,
) -> tuple[float, np.ndarray]:
    """Cost and its exact gradient from one forward and one reverse (adjoint) sweep."""
    _check_hamiltonian(circuit, h)
    values = check_params(circuit, params)
    n = circuit.num_qubits
    phi = evaluate_buffer(circuit, values, initial)
    lam = hamiltonian_apply(phi, n, h)
    value = real_part(complex(np.vdot(phi, lam)))

    grad = np.zeros(circuit.num_params)
    for gate in reversed(circuit.gates):
        if gate.param_index is not None:
            if gate.kind is GateKind.PAULI_EXP:
                term = gate.fixed_term
            else:
                term = _rotation_term(gate.qubits[0], "X" if gate.kind is GateKind.ROT_X else "Z")
            moved = _generator_apply(phi, n, gate.kind, term)
            grad[gate.param_index] += 2.0 * float(np.vdot(lam, moved).imag)
        apply_gate_inplace(phi, n, gate, values, inverse=True)
        apply_gate_inplace(lam, n, gate, values, inverse=True)
    return value, grad


def _shift_rule(circuit: CircuitSpec, index: int) -> tuple[float, float]:
    """Return ``(scale, shift)`` so that ``∂C = scale·[C(θ+shift) - C(θ-shift)]``."""
    gates = circuit.gates_using(index)
    if len(gates) != 1:
        raise GradientMethodError(
            f"parameter {index} drives {len(gates)} gates; parameter shift needs exactly one"
        )
    gate = gates[0]
    if gate.kind in (GateKind.ROT_X, GateKind.ROT_Z):
        return 0.5, _HALF_PI
    c = gate.fixed_term.coefficient
    return c, math.pi / (4 * c)


def parameter_shift_gradient(
    circuit: CircuitSpec,
    params: Sequence[float] | np.ndarray,
    h: PauliSum,
    initial: StateVector | None = None,
) -> np.ndarray:
    values = check_params(circuit, params)
    rules = [_shift_rule(circuit, j) for j in range(circuit.num_params)]
    grad = np.zeros(circuit.num_params)
    for j, (scale, shift) in enumerate(rules):
        plus = values.copy()
        plus[j] += shift
        minus = values.copy()
        minus[j] -= shift
        grad[j] = scale * (cost(circuit, plus, h, initial) - cost(circuit, minus, h, initial))
    return grad


def finite_difference_gradient(
    circuit: CircuitSpec,
    params: Sequence[float] | np.ndarray,
    h: PauliSum,
    initial: StateVector | None = None,
    step: float = 1e-5,
) -> np.ndarray:
    values = check_params(circuit, params)
    grad = np.zeros(circuit.num_params)
    for j in range(circuit.num_params):
        plus = values.copy()
        plus[j] += step
        minus = values.copy()
        minus[j] -= step
        grad[j] = (cost(circuit, plus, h, initial) - cost(circuit, minus, h, initial)) / (2 * step)
    return grad


def gradient(
    circuit: CircuitSpec,
    params: Sequence[float] | np.ndarray,
    h: PauliSum,
    initial: StateVector | None = None,
    method: GradientMethod = "adjoint",
    fd_step: float = 1e-5,
) -> np.ndarray:
    """``∇C`` by adjoint sweep (default), parameter shift, or central finite difference."""
    _check_hamiltonian(circuit, h)
    if method == "adjoint":
        return value_and_gradient(circuit, params, h, initial)[1]
    if method == "parameter_shift":
        return parameter_shift_gradient(circuit, params, h, initial)
    if method == "finite_difference":
        return finite_difference_gradient(circuit, params, h, initial, fd_step)
    raise GradientMethodError(f"unknown gradient method {method!r}")


def normalized_grad_norm(grad: Sequence[float] | np.ndarray) -> float:
    """``G = (1/L) Σ (∂_l C)²``."""
    values = np.asarray(grad, dtype=np.float64).reshape(-1)
    if values.size == 0:
        raise AnalysisError("normalized gradient norm of an empty gradient")
    return float(np.mean(values * values))


class _NonFinite(Exception):
    pass


@dataclass
class BfgsResult:
    params: np.ndarray
    energy: float | None
    iterations: int
    converged: bool
    failed: bool
    energy_trace: list[float] = field(default_factory=list)
    grad_norm_trace: list[float] = field(default_factory=list)
    message: str = ""


def bfgs_minimize(
    circuit: CircuitSpec,
    h: PauliSum,
    initial_params: Sequence[float] | np.ndarray,
    config: OptimizerConfig | None = None,
    initial: StateVector | None = None,
) -> BfgsResult:
    """Minimize the cost with BFGS and a strong-Wolfe line search.

    Stops at ``max|∇C| < grad_tol``, a relative step below ``step_tol`` or after
    ``iter_cap`` iterations. Trace index 0 is the starting point. A non-finite
    cost or gradient ends the trial with ``failed=True``. ``config.gradient`` picks
    the gradient method; finite differences use ``config.fd_step``.
    """
    config = config or OptimizerConfig()
    x0 = check_params(circuit, initial_params).copy()
    evaluations: OrderedDict[bytes, tuple[float, np.ndarray]] = OrderedDict()
    last_good: list[np.ndarray] = [x0]

    def fun(x: np.ndarray) -> tuple[float, np.ndarray]:
        if config.gradient == "adjoint":
            value, grad = value_and_gradient(circuit, x, h, initial)
        else:
            value = cost(circuit, x, h, initial)
            grad = gradient(circuit, x, h, initial, config.gradient, config.fd_step)
        if not (math.isfinite(value) and np.all(np.isfinite(grad))):
            raise _NonFinite(f"non-finite cost or gradient (cost={value})")
        evaluations[x.tobytes()] = (value, grad)
        if len(evaluations) > 32:
            evaluations.popitem(last=False)
        return value, grad

    def observe(x: np.ndarray) -> None:
        hit = evaluations.get(x.tobytes())
        value, grad = hit if hit is not None else fun(x)
        energy_trace.append(value)
        grad_norm_trace.append(normalized_grad_norm(grad))
        last_good[0] = x.copy()

    def callback(intermediate_result: scipy.optimize.OptimizeResult) -> None:
        observe(np.asarray(intermediate_result.x))

    energy_trace: list[float] = []
    grad_norm_trace: list[float] = []
    try:
        observe(x0)
        result = scipy.optimize.minimize(
            fun,
            x0,
            jac=True,
            method="BFGS",
            callback=callback,
            options={
                "gtol": config.grad_tol,
                "norm": np.inf,
                "maxiter": config.iter_cap,
                "xrtol": config.step_tol,
                "c1": config.wolfe_c1,
                "c2": config.wolfe_c2,
            },
        )
    except _NonFinite as exc:
        logger.debug("trial aborted", extra={"reason": str(exc)})
        return BfgsResult(
            params=last_good[0],
            energy=energy_trace[-1] if energy_trace else None,
            iterations=max(len(energy_trace) - 1, 0),
            converged=False,
            failed=True,
            energy_trace=energy_trace,
            grad_norm_trace=grad_norm_trace,
            message=str(exc),
        )

    final_energy = float(result.fun)
    return BfgsResult(
        params=np.asarray(result.x, dtype=np.float64),
        energy=final_energy,
        iterations=int(result.nit),
        converged=int(result.status) == 0,
        failed=False,
        energy_trace=energy_trace,
        grad_norm_trace=grad_norm_trace,
        message=str(result.message),
    )
