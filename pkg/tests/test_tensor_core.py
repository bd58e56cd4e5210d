"""
Test dense complex primitives
"""
import numpy as np
import pytest
from scipy.stats import unitary_group

from src.core.tensor_core import (
    BipartiteState,
    as_matrix,
    check_tol,
    coefficients_in_frame,
    common_nullspace,
    fidelity_pure,
    is_maximally_entangled,
    is_unitary,
    kron,
    kron_all,
    overlap_fidelity,
    partial_trace,
    reduced_state,
)
from src.core.weyl_basis import pauli_z, psi00
from src.utils.errors import DimensionError, InvalidStateError


def test_kron_dimensions():
    a = np.ones((2, 3))
    b = np.eye(4)
    assert kron(a, b).shape == (8, 12)
    assert kron_all([np.eye(2), np.eye(3), np.eye(2)]).shape == (12, 12)


def test_as_matrix_rejects_bad_input():
    with pytest.raises(DimensionError):
        as_matrix(np.ones(3))
    with pytest.raises(ValueError):
        as_matrix([[1.0, np.nan]])


def test_check_tol():
    assert check_tol(0.0) == 0.0
    with pytest.raises(ValueError):
        check_tol(-1e-3)


def test_bipartite_state_normalization():
    state = BipartiteState(2, 2, np.array([1, 0, 0, 1]) / np.sqrt(2))
    assert state.dim == 4
    np.testing.assert_allclose(state.coefficients(), np.eye(2) / np.sqrt(2))
    with pytest.raises(InvalidStateError):
        BipartiteState(2, 2, np.array([1, 0, 0, 1]))
    with pytest.raises(DimensionError):
        BipartiteState(2, 3, np.array([1, 0, 0, 0]))


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 2, 2)])
def test_partial_trace_of_product(dims, rng):
    factors = []
    for d in dims:
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        v /= np.linalg.norm(v)
        factors.append(np.outer(v, v.conj()))
    rho = kron_all(factors)
    for keep in range(len(dims)):
        np.testing.assert_allclose(partial_trace(rho, dims, {keep}), factors[keep], atol=1e-12)
    np.testing.assert_allclose(partial_trace(rho, dims, set()), [[1.0]], atol=1e-12)


def test_partial_trace_bad_dims():
    with pytest.raises(DimensionError):
        partial_trace(np.eye(4), [2, 3], {0})
    with pytest.raises(DimensionError):
        partial_trace(np.eye(4), [2, 2], {2})


def test_fidelities():
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    rho = np.outer(psi, psi.conj())
    assert fidelity_pure(psi, rho) == pytest.approx(1.0)
    assert overlap_fidelity(psi, np.array([1, 0, 0, 0])) == pytest.approx(0.5)
    with pytest.raises(DimensionError):
        fidelity_pure(psi, np.eye(2))


@pytest.mark.parametrize("seed", range(5))
def test_is_unitary(seed):
    u = unitary_group.rvs(4, random_state=seed)
    assert is_unitary(u)
    assert not is_unitary(2 * u)


def test_common_nullspace():
    m1 = np.array([[1, 0, 0], [0, 1, 0]], dtype=complex)
    m2 = np.array([[0, 0, 0]], dtype=complex)
    basis = common_nullspace([m1, m2])
    assert len(basis) == 1
    np.testing.assert_allclose(np.abs(basis[0]), [0, 0, 1], atol=1e-12)
    assert common_nullspace([np.eye(3)]) == []
    with pytest.raises(DimensionError):
        common_nullspace([np.eye(2), np.eye(3)])


def test_maximal_entanglement_and_frames():
    bell = BipartiteState.from_coefficients(np.eye(3) / np.sqrt(3))
    assert is_maximally_entangled(bell, 1e-8)
    product = BipartiteState(3, 3, np.eye(9)[0])
    assert not is_maximally_entangled(product, 1e-8)
    np.testing.assert_allclose(reduced_state(product, keep=1), np.diag([1, 0, 0]))

    u = unitary_group.rvs(3, random_state=7)
    coeffs = coefficients_in_frame(bell, u, u.conj())
    np.testing.assert_allclose(coeffs, np.eye(3) / np.sqrt(3), atol=1e-12)


@pytest.mark.parametrize("shapes", [((2, 2), (3, 3), (2, 2)), ((2, 3), (1, 4), (3, 2))])
def test_kron_is_associative(shapes, rng):
    a, b, c = (rng.standard_normal(s) + 1j * rng.standard_normal(s) for s in shapes)
    np.testing.assert_allclose(kron(kron(a, b), c), kron(a, kron(b, c)), atol=1e-12)


def test_kron_of_clock_operators():
    z = pauli_z(3)
    omega = np.exp(2j * np.pi / 3)
    assert kron(z, z)[4, 4] == pytest.approx(omega ** 2)


@pytest.mark.parametrize("dims", [(2, 3), (3, 2, 2)])
def test_partial_trace_preserves_trace(dims, rng):
    n = int(np.prod(dims))
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    rho = g @ g.conj().T
    for keep in [{0}, {1}, set(range(len(dims)))]:
        assert np.trace(partial_trace(rho, dims, keep)) == pytest.approx(np.trace(rho))


def test_partial_trace_of_maximally_entangled_pair():
    amps = psi00(2).amplitudes
    rho = np.outer(amps, amps.conj())
    np.testing.assert_allclose(partial_trace(rho, [2, 2], {0}), np.eye(2) / 2, atol=1e-12)


@pytest.mark.parametrize("seed", range(3))
def test_fidelity_is_rotation_invariant(seed, rng):
    u = unitary_group.rvs(4, random_state=seed)
    psi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    psi /= np.linalg.norm(psi)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    rho = g @ g.conj().T
    rho /= np.trace(rho)
    rotated = fidelity_pure(u @ psi, u @ rho @ u.conj().T)
    assert rotated == pytest.approx(fidelity_pure(psi, rho), abs=1e-12)


def test_common_nullspace_redundant_maps(rng):
    m = rng.standard_normal((3, 6)) + 1j * rng.standard_normal((3, 6))
    basis = common_nullspace([m, 2 * m, m[:1]])
    assert len(basis) == 3
    eps = np.finfo(float).eps
    for v in basis:
        for op in (m, 2 * m, m[:1]):
            assert np.max(np.abs(op @ v)) <= 10 * eps * np.linalg.norm(op, 2) * op.shape[1]


def test_common_nullspace_absolute_floor():
    # 0 에 가까운 사상은 상대 절단으로는 전부 랭크로 남는다
    tiny = 1e-14 * np.array([[1, 0, 0], [0, 1, 0]], dtype=complex)
    assert len(common_nullspace([tiny])) == 3
    assert len(common_nullspace([tiny], atol=0.0)) == 1
