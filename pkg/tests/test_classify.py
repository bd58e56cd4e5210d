"""
Test spectrum condition, classification, lemma verifier and SSD testers
"""
import numpy as np
import pytest
from scipy.stats import unitary_group

from src.copying.classify import (
    Caveat,
    _relaxed_solution,
    classify_copiable,
    lemma1_property_suite,
    normal_form_set,
    simultaneous_eigenbasis,
    spectrum_condition,
    ssd_canonical,
    ssd_general,
    verify_lemma1,
    xi_to_lemma_tensor,
)
from src.copying.copy_engine import CopiedSet, XiTensor
from src.core.tensor_core import BipartiteState, is_unitary
from src.core.weyl_basis import (
    BellIndex,
    bell_set,
    bell_state,
    fourier_matrix,
    pauli_x,
    pauli_z,
    psi00,
    state_from_unitary,
    theorem3_set,
    weyl_operator,
)
from src.utils.errors import HypothesisError, InvalidSetError, NotUnitaryError


def _indices(pairs, dim):
    return [BellIndex(n, m, dim) for n, m in pairs]


class TestSpectrumCondition:
    @pytest.mark.parametrize("dim", [2, 3, 4, 5])
    def test_z_passes(self, dim):
        assert spectrum_condition(pauli_z(dim), dim)

    def test_zx_fails_strictly(self):
        assert not spectrum_condition(weyl_operator(1, 1, 2), 2)
        assert spectrum_condition(weyl_operator(1, 1, 2), 2, rephase=True)

    def test_identity_and_subgroups(self):
        assert spectrum_condition(np.eye(3), 3)
        assert spectrum_condition(np.linalg.matrix_power(pauli_z(4), 2), 4)
        # eigenvalues {1, 1, i}: unequal multiplicity and not a subgroup
        assert not spectrum_condition(np.diag([1, 1, 1j]), 3)

    def test_non_unitary(self):
        with pytest.raises(NotUnitaryError):
            spectrum_condition(2 * np.eye(2), 2)


class TestClassify:
    def test_theorem3_set(self):
        verdict = classify_copiable(theorem3_set(3, [0, 1, 2]))
        assert verdict.copiable
        assert verdict.exponents == (0, 1, 2)
        assert verdict.caveat is Caveat.NONE

    def test_non_commuting(self):
        verdict = classify_copiable(bell_set(_indices([(0, 0), (1, 0), (0, 1)], 2)))
        assert not verdict.copiable
        assert "가환" in verdict.reason

    def test_x_pair_uses_hadamard_basis(self):
        verdict = classify_copiable(bell_set(_indices([(0, 0), (0, 1)], 2)))
        assert verdict.copiable
        assert verdict.exponents == (0, 1)
        rotated = verdict.basis.conj().T @ pauli_x(2) @ verdict.basis
        np.testing.assert_allclose(rotated, np.diag([1, -1]) * rotated[0, 0], atol=1e-9)
        overlap = np.abs(verdict.basis.conj().T @ fourier_matrix(2))
        np.testing.assert_allclose(np.sort(overlap, axis=1), [[0, 1], [0, 1]], atol=1e-9)

    @pytest.mark.parametrize("seed", range(3))
    def test_invariant_under_conjugation_and_phases(self, seed):
        v = unitary_group.rvs(3, random_state=seed)
        phases = np.exp(2j * np.pi * np.array([0.1, 0.7, 0.3]))
        s = CopiedSet(3, tuple(p * v @ np.linalg.matrix_power(pauli_z(3), j) @ v.conj().T for p, j in zip(phases, range(3))))
        verdict = classify_copiable(s)
        assert verdict.copiable
        assert is_unitary(verdict.basis, 1e-8)
        for u, n in zip(s.unitaries, verdict.exponents):
            rotated = verdict.basis.conj().T @ u @ s.unitaries[0].conj().T @ verdict.basis
            expected = np.diag(np.exp(2j * np.pi * n * np.arange(3) / 3))
            phase = rotated[0, 0]
            np.testing.assert_allclose(rotated, phase * expected, atol=1e-8)

    def test_composite_caveat(self):
        verdict = classify_copiable(CopiedSet(4, (np.eye(4), np.linalg.matrix_power(pauli_z(4), 2))))
        assert verdict.copiable
        assert verdict.exponents == (0, 2)
        assert verdict.caveat is Caveat.COMPOSITE_DIM_UNPROVEN

    def test_non_orthogonal_set(self):
        with pytest.raises(InvalidSetError):
            classify_copiable(CopiedSet(2, (np.eye(2), np.eye(2))))

    def test_simultaneous_eigenbasis_degenerate(self):
        z2 = np.linalg.matrix_power(pauli_z(4), 2)
        basis = simultaneous_eigenbasis([np.eye(4), z2, pauli_z(4)])
        rotated = basis.conj().T @ pauli_z(4) @ basis
        np.testing.assert_allclose(rotated, np.diag(np.diag(rotated)), atol=1e-9)


class TestLemma1:
    def test_character_diagonal_passes(self):
        dim = 3
        u = np.diag(np.exp(2j * np.pi * np.arange(dim) / dim))
        report = verify_lemma1(u, xi_to_lemma_tensor(XiTensor.delta(dim)))
        assert report.satisfies
        assert report.diagonal
        assert report.consistent

    def test_off_diagonal_fails(self, rng):
        dim = 3
        u = np.eye(dim, dtype=complex)
        u[0, 1] = 0.5
        report = verify_lemma1(u, xi_to_lemma_tensor(XiTensor.random(dim, rng)))
        assert not report.satisfies
        assert not report.diagonal

    def test_zero_is_vacuous(self):
        report = verify_lemma1(np.zeros((2, 2)), xi_to_lemma_tensor(XiTensor.delta(2)))
        assert report.satisfies
        assert report.vacuous
        assert report.consistent

    def test_hypothesis_violation(self):
        with pytest.raises(HypothesisError):
            verify_lemma1(np.eye(2), np.zeros((2, 2, 2, 2)))

    def test_lemma_tensor_hypothesis(self, rng):
        tensor = xi_to_lemma_tensor(XiTensor.random(3, rng))
        for c in range(3):
            np.testing.assert_allclose(tensor[c, c], np.eye(3), atol=1e-12)

    @pytest.mark.parametrize("dim", [2, 3])
    def test_property_suite(self, dim, rng):
        result = lemma1_property_suite(dim, 60, rng)
        assert result.counterexamples == 0
        # 지표 대각 15 회와 방정식을 푼 수치해만 만족한다
        assert result.satisfied == 15 + result.relaxed_solutions

    def test_relaxed_solutions_are_diagonal(self):
        xi_tensor = xi_to_lemma_tensor(XiTensor.delta(2))
        rng = np.random.default_rng(5)
        reports = [verify_lemma1(_relaxed_solution(xi_tensor, 2, rng), xi_tensor, 1e-8) for _ in range(10)]
        solved = [r for r in reports if r.satisfies]
        assert solved
        assert all(r.diagonal for r in solved)


class TestSsd:
    def test_canonical_witnesses(self):
        assert ssd_canonical(_indices([(0, 0), (1, 1), (2, 2)], 3), 3).triple == (1, 2, 0)
        assert ssd_canonical(_indices([(0, 1), (1, 0)], 2), 2).triple == (1, 1, 1)
        assert ssd_canonical(_indices([(0, 0), (0, 1), (1, 0)], 2), 2) is None

    @pytest.mark.parametrize("pairs,dim", [
        ([(0, 0), (1, 1), (2, 2)], 3),
        ([(0, 1), (1, 0)], 2),
        ([(0, 0), (0, 1), (0, 2)], 3),
        ([(1, 2), (2, 0), (0, 1)], 3),
        ([(0, 0), (1, 2), (2, 4), (3, 1)], 5),
    ])
    def test_normal_form_reconstructs_states(self, pairs, dim):
        indices = _indices(pairs, dim)
        witness = ssd_canonical(indices, dim)
        assert witness is not None
        for idx, row in zip(indices, witness.coefficients):
            rebuilt = witness.basis_a @ np.diag(row) @ witness.basis_b.T
            np.testing.assert_allclose(rebuilt, bell_state(idx).coefficients(), atol=1e-9)
        assert classify_copiable(normal_form_set(witness)).copiable

    def test_canonical_rejects_duplicates(self):
        with pytest.raises(InvalidSetError):
            ssd_canonical(_indices([(0, 0), (0, 0)], 2), 2)

    def test_general_computational(self):
        witness = ssd_general([psi00(3), state_from_unitary(pauli_z(3), 3)])
        assert witness is not None
        np.testing.assert_allclose(witness.basis_a, np.eye(3))

    def test_general_needs_rotated_frame(self):
        witness = ssd_general([psi00(2), state_from_unitary(pauli_x(2), 2)])
        assert witness is not None
        overlap = np.abs(witness.basis_a.conj().T @ fourier_matrix(2))
        np.testing.assert_allclose(np.sort(overlap, axis=1), [[0, 1], [0, 1]], atol=1e-9)

    def test_general_non_ssd(self):
        states = [bell_state(idx) for idx in _indices([(0, 0), (0, 1), (1, 0)], 2)]
        assert ssd_general(states) is None

    def test_general_schmidt_frame(self, rng):
        u = unitary_group.rvs(3, random_state=1)
        v = unitary_group.rvs(3, random_state=2)
        states = [
            BipartiteState.from_coefficients(u @ np.diag(c) @ v.T, normalize=True)
            for c in ([0.8, 0.5, 0.1], [0.3, -0.6, 0.2j])
        ]
        witness = ssd_general(states)
        assert witness is not None
