"""Tests for Pauli terms, sums and the exact eigensolvers."""

import numpy as np
import pytest
from vqtransfer.errors import (
    InvalidSizeError,
    PauliTermError,
    QubitIndexError,
    QubitMismatchError,
    SizeLimitError,
)
from vqtransfer.models import build_tfim
from vqtransfer.pauli import (
    CACHE_MAX_QUBITS,
    PauliSum,
    PauliTerm,
    _cached_action,
    canonicalize,
    ground_energy,
    ground_space,
    ground_state,
    pauli_action,
    to_dense,
    to_sparse,
)

from tests.oracles import naive_dense, power_iteration_ground


def z(q: int, c: float = 1.0) -> PauliTerm:
    return PauliTerm(c, ((q, "Z"),))


def test_identical_strings_merge() -> None:
    h = canonicalize([z(0, 1.0), z(0, 2.0)], 1)
    assert h.terms == (PauliTerm(3.0, ((0, "Z"),)),)


def test_tiny_coefficients_are_dropped() -> None:
    h = PauliSum((PauliTerm(1e-15, ((0, "X"),)),), 2)
    assert h.terms == ()


def test_factors_sorted_by_qubit() -> None:
    term = PauliTerm(0.5, ((1, "X"), (0, "Z")))
    assert term.factors == ((0, "Z"), (1, "X"))


def test_from_word_and_word() -> None:
    term = PauliTerm.from_word(0.5, "xiz")
    assert term.factors == ((0, "X"), (2, "Z"))
    assert term.word(3) == "XIZ"
    with pytest.raises(QubitIndexError):
        term.word(2)


@pytest.mark.parametrize(
    "factors",
    [((0, "X"), (0, "Z")), ((0, "Q"),)],
)
def test_bad_factors_rejected(factors: tuple) -> None:
    with pytest.raises(PauliTermError):
        PauliTerm(1.0, factors)


def test_negative_qubit_rejected() -> None:
    with pytest.raises(QubitIndexError):
        PauliTerm(1.0, ((-1, "X"),))


def test_complex_coefficient_rejected() -> None:
    with pytest.raises(PauliTermError):
        PauliTerm(1j, ((0, "X"),))


def test_term_outside_register_rejected() -> None:
    with pytest.raises(QubitIndexError):
        PauliSum((z(2),), 2)


def test_zero_qubit_sum_rejected() -> None:
    with pytest.raises(InvalidSizeError):
        PauliSum((), 0)


def test_arithmetic() -> None:
    a = PauliSum((z(0),), 2)
    b = PauliSum((PauliTerm(2.0, ((1, "X"),)),), 2)
    total = 2 * (a + b) - a
    assert total == PauliSum((z(0, 1.0), PauliTerm(4.0, ((1, "X"),))), 2)
    assert (a - a).terms == ()
    assert (a + 1.5).one_norm() == pytest.approx(2.5)
    with pytest.raises(QubitMismatchError):
        a + PauliSum((z(0),), 3)


def test_commutation() -> None:
    xx = PauliTerm.from_word(1.0, "XX")
    zz = PauliTerm.from_word(1.0, "ZZ")
    assert xx.commutes_with(zz)
    assert not PauliTerm.from_word(1.0, "XI").commutes_with(PauliTerm.from_word(1.0, "ZI"))
    assert PauliSum((xx, zz), 2).is_commuting()
    assert not PauliSum((xx, z(0)), 2).is_commuting()


def test_embed_shifts_qubits() -> None:
    h = PauliSum((PauliTerm.from_word(1.0, "XZ"),), 2).embed(3, 5)
    assert h.num_qubits == 5
    assert h.terms[0].factors == ((3, "X"), (4, "Z"))


def test_dense_single_z() -> None:
    np.testing.assert_allclose(to_dense(PauliSum((z(0),), 1)), np.diag([1, -1]))


def test_dense_xx_is_antidiagonal() -> None:
    dense = to_dense(PauliSum((PauliTerm.from_word(1.0, "XX"),), 2))
    np.testing.assert_allclose(dense, np.fliplr(np.eye(4)))


def test_dense_little_endian() -> None:
    # Z on qubit 0 flips the sign of odd basis indices
    dense = to_dense(PauliSum((z(0),), 2))
    np.testing.assert_allclose(np.diag(dense).real, [1, -1, 1, -1])


def test_dense_matches_kronecker_builder() -> None:
    h = build_tfim(4, 1.0, 2.0, periodic=True)
    np.testing.assert_allclose(to_dense(h), naive_dense(h), atol=1e-12)


def test_dense_with_y_terms_matches_kronecker_builder() -> None:
    h = PauliSum(
        (
            PauliTerm.from_word(0.3, "XYZ"),
            PauliTerm.from_word(-1.2, "YIY"),
            PauliTerm.from_word(0.7, "IZX"),
            PauliTerm(0.25),
        ),
        3,
    )
    np.testing.assert_allclose(to_dense(h), naive_dense(h), atol=1e-12)
    np.testing.assert_allclose(to_sparse(h).toarray(), naive_dense(h), atol=1e-12)


def test_action_tables_are_cached_only_for_small_registers() -> None:
    _cached_action.cache_clear()
    pauli_action(((0, "Z"),), 3)
    assert _cached_action.cache_info().currsize == 1

    n = CACHE_MAX_QUBITS + 1
    perm, phase = pauli_action(((0, "X"), (n - 1, "Y")), n)
    again, _ = pauli_action(((0, "X"), (n - 1, "Y")), n)
    assert _cached_action.cache_info().currsize == 1
    assert again is not perm
    assert perm[0] == 1 | 1 << (n - 1)
    assert perm.size == phase.size == 1 << n


def test_dense_size_limit() -> None:
    h = PauliSum((z(12),), 13)
    with pytest.raises(SizeLimitError):
        to_dense(h)
    with pytest.raises(SizeLimitError):
        ground_energy(h)


def test_ground_energy_minus_z() -> None:
    assert ground_energy(PauliSum((z(0, -1.0),), 1)) == pytest.approx(-1.0)


def test_ising_ring_ground_energy() -> None:
    assert ground_energy(build_tfim(4, 1.0, 0.0, periodic=True)) == pytest.approx(-4.0, abs=1e-10)


def test_tfim_ground_energy_agrees_with_power_iteration() -> None:
    h = build_tfim(4, 1.0, 2.0, periodic=True)
    assert ground_energy(h) == pytest.approx(power_iteration_ground(naive_dense(h)), abs=1e-8)


def test_ground_state_is_eigenvector() -> None:
    h = build_tfim(3, 1.0, 2.0, periodic=False)
    energy, vector = ground_state(h)
    np.testing.assert_allclose(to_dense(h) @ vector, energy * vector, atol=1e-10)
    assert np.linalg.norm(vector) == pytest.approx(1.0)


def test_identity_shift_and_scaling() -> None:
    h = build_tfim(3, 1.0, 2.0, periodic=True)
    e0 = ground_energy(h)
    assert ground_energy(h + 3.0) == pytest.approx(e0 + 3.0, abs=1e-10)
    assert ground_energy(h * 2.0) == pytest.approx(2.0 * e0, abs=1e-10)


def test_iterative_path_above_dense_eigh_limit() -> None:
    n = 11
    h = PauliSum(tuple(z(q, -1.0) for q in range(n)), n)
    energy, vector = ground_state(h)
    assert energy == pytest.approx(-11.0, abs=1e-8)
    assert abs(vector[0]) == pytest.approx(1.0, abs=1e-8)


def test_ground_space_degeneracy() -> None:
    # +Z0Z1 has the two anti-aligned states as its ground space
    energy, basis = ground_space(PauliSum((PauliTerm.from_word(1.0, "ZZ"),), 2))
    assert energy == pytest.approx(-1.0)
    assert basis.shape == (4, 2)
    weights = np.sum(np.abs(basis) ** 2, axis=1)
    np.testing.assert_allclose(weights, [0, 1, 1, 0], atol=1e-12)
