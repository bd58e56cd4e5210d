"""
Test separable POVM bound and the one-way transfer / discrimination protocol
"""
import numpy as np
import pytest
from scipy.stats import unitary_group

from src.core.tensor_core import BipartiteState, is_unitary, partial_trace
from src.core.weyl_basis import BellIndex, bell_state, psi00, state_from_unitary, pauli_z
from src.discrimination.discriminate import (
    ProductTerm,
    SeparablePovm,
    apply_channel,
    build_transfer_channel,
    operator_schmidt_rank,
    povm_bound_check,
    random_separable_povm,
    simulate_discrimination,
    simulate_transfer,
    transfer_cnot,
)
from src.discrimination.run_discrimination import main as run_discrimination_main
from src.utils.errors import ChannelError, InvalidStateError, PovmError, ProtocolError


def _computational_channel(dim, convention="conjugated-bra"):
    return build_transfer_channel(dim, np.eye(dim), np.eye(dim), convention)


class TestPovmBound:
    def test_identity_povm(self):
        report = povm_bound_check(SeparablePovm.identity(2), [psi00(2)])
        assert report.probabilities[0, 0] == pytest.approx(1.0)
        assert report.bounds[0] == pytest.approx(2.0)
        assert report.min_slack == pytest.approx(1.0)
        assert report.violations == 0

    def test_tight_product_element(self):
        report = povm_bound_check(SeparablePovm.computational(2), [psi00(2)])
        assert report.probabilities[0, 0] == pytest.approx(0.5)
        assert abs(report.slack[0, 0]) <= 1e-12

    @pytest.mark.parametrize("dim", [2, 3])
    def test_random_povms_respect_bound(self, dim, rng):
        states = [bell_state(BellIndex(n, m, dim)) for n in range(dim) for m in range(dim)]
        for _ in range(20):
            povm = random_separable_povm(dim, 50, int(rng.integers(1, 6)), rng)
            assert povm.completeness_residual() <= 1e-9
            report = povm_bound_check(povm, states)
            assert report.violations == 0
            assert report.min_slack >= -1e-9
            assert report.size_bound_holds

    def test_incomplete_povm(self):
        povm = SeparablePovm(2, 2, ((ProductTerm(1.0, [1, 0], [1, 0]),),))
        with pytest.raises(PovmError):
            povm_bound_check(povm, [psi00(2)])

    def test_negative_weight(self):
        with pytest.raises(PovmError):
            ProductTerm(-0.1, [1, 0], [1, 0])

    def test_requires_maximal_entanglement(self):
        product = BipartiteState(2, 2, np.array([1, 0, 0, 0]))
        with pytest.raises(InvalidStateError):
            povm_bound_check(SeparablePovm.identity(2), [product])


class TestTransferChannel:
    def test_conjugated_bra_complete(self):
        channel = _computational_channel(2)
        assert len(channel.elements) == 2
        assert channel.kraus_residual < 1e-12
        assert channel.resolution_residual < 1e-12

    @pytest.mark.parametrize("dim", [3, 5])
    def test_literal_convention_flagged(self, dim):
        channel = _computational_channel(dim, "literal")
        assert channel.resolution_residual > 0.1
        assert channel.flagged()
        assert channel.kraus_residual < 1e-10

    def test_conventions_coincide_in_qubits(self):
        literal = _computational_channel(2, "literal")
        conjugated = _computational_channel(2)
        for a, b in zip(literal.elements, conjugated.elements):
            np.testing.assert_allclose(a, b, atol=1e-12)

    @pytest.mark.parametrize("dim", [2, 3, 5])
    def test_cnot_unitary(self, dim):
        e = unitary_group.rvs(dim, random_state=dim)
        f = unitary_group.rvs(dim, random_state=dim + 1)
        assert is_unitary(transfer_cnot(e, f))

    def test_rejects_non_unitary_basis(self):
        with pytest.raises(ChannelError):
            build_transfer_channel(2, 2 * np.eye(2), np.eye(2))
        with pytest.raises(ChannelError):
            build_transfer_channel(2, np.eye(2), np.eye(2), "other")

    @pytest.mark.parametrize("dim", [2, 3, 5])
    def test_trace_preserving(self, dim, rng):
        channel = _computational_channel(dim)
        v = rng.standard_normal(dim ** 3) + 1j * rng.standard_normal(dim ** 3)
        rho = np.outer(v, v.conj()) / np.vdot(v, v).real
        assert np.trace(apply_channel(channel, rho)).real == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("dim", [2, 3])
    def test_one_way_structure(self, dim):
        channel = _computational_channel(dim)
        for element in channel.elements:
            assert operator_schmidt_rank(element, [dim], [dim, dim]) == 1


class TestTransfer:
    def test_psi00(self):
        result = simulate_transfer(_computational_channel(2), psi00(2))
        assert result.fidelity == pytest.approx(1.0, abs=1e-9)
        np.testing.assert_allclose(result.rho_a, np.eye(2) / 2, atol=1e-9)

    def test_z_state(self):
        result = simulate_transfer(_computational_channel(3), state_from_unitary(pauli_z(3), 3))
        assert result.fidelity == pytest.approx(1.0, abs=1e-9)

    def test_product_state(self):
        result = simulate_transfer(_computational_channel(2), BipartiteState(2, 2, np.array([1, 0, 0, 0])))
        assert result.fidelity == pytest.approx(1.0, abs=1e-9)

    def test_literal_convention_degrades(self):
        result = simulate_transfer(_computational_channel(3, "literal"), state_from_unitary(pauli_z(3), 3))
        assert result.fidelity < 0.9

    def test_sigma_a_independent_of_state(self):
        channel = _computational_channel(3)
        rhos = [simulate_transfer(channel, bell_state(BellIndex(n, 0, 3))).rho_a for n in range(3)]
        for rho in rhos:
            np.testing.assert_allclose(rho, rhos[0], atol=1e-9)

    def test_output_is_product(self):
        channel = _computational_channel(2)
        vec = np.kron(psi00(2).amplitudes, [1, 0])
        rho_out = apply_channel(channel, np.outer(vec, vec.conj()))
        rho_a = partial_trace(rho_out, [2, 2, 2], {0})
        rho_b = partial_trace(rho_out, [2, 2, 2], {1, 2})
        np.testing.assert_allclose(rho_out, np.kron(rho_a, rho_b), atol=1e-9)


class TestDiscrimination:
    @pytest.mark.parametrize("pairs,dim", [
        ([(0, 0), (1, 1)], 2),
        ([(0, 0), (1, 1), (2, 2)], 3),
        ([(0, 0)], 2),
        ([(0, 0), (0, 1), (0, 2)], 3),
    ])
    def test_perfect_discrimination(self, pairs, dim):
        result = simulate_discrimination([BellIndex(n, m, dim) for n, m in pairs], dim)
        np.testing.assert_allclose(result.success, np.eye(len(pairs)), atol=1e-9)
        assert result.is_perfect()

    def test_non_ssd_set(self):
        with pytest.raises(ProtocolError):
            simulate_discrimination([BellIndex(0, 0, 2), BellIndex(0, 1, 2), BellIndex(1, 0, 2)], 2)


def test_run_discrimination_script(capsys):
    run_discrimination_main()
    out = capsys.readouterr().out
    assert "=== 단방향 LOCC 판별 결과 ===" in out
    assert "완전 판별: 성공" in out
    assert "SSD 삼중항" in out
