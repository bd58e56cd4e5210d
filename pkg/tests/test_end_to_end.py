"""
End-to-end reproduction of the copying, discrimination and bound results on small dimensions
"""
import math

import numpy as np
import pytest

from src.copying.classify import (
    classify_copiable,
    lemma1_property_suite,
    normal_form_set,
    spectrum_condition,
    ssd_canonical,
    verify_lemma1,
    xi_to_lemma_tensor,
)
from src.copying.copy_engine import XiTensor, build_copier, copy_fidelities
from src.copying.search import search_copiable_sets
from src.core.tensor_core import dagger, max_abs
from src.core.weyl_basis import BellIndex, bell_set, bell_state, pauli_z, psi00, theorem3_set, weyl_operator
from src.discrimination.discriminate import (
    SeparablePovm,
    build_transfer_channel,
    povm_bound_check,
    random_separable_povm,
    simulate_discrimination,
)


@pytest.fixture(scope="module")
def enumerations():
    return {dim: search_copiable_sets(dim, dim + 1, attempts=16) for dim in (2, 3)}


@pytest.mark.parametrize("dim", [2, 3, 5, 7])
def test_z_powers_copied_with_delta_copier(dim):
    a = build_copier(dim, XiTensor.delta(dim))
    fidelities = copy_fidelities(a, psi00(dim), theorem3_set(dim, range(dim)))
    assert min(fidelities) >= 1 - 1e-9


@pytest.mark.parametrize("dim", [2, 3])
def test_classifier_agrees_with_solver(enumerations, dim):
    result = enumerations[dim]
    assert len(result.rows) == sum(math.comb(dim * dim, k) for k in range(1, dim + 2))
    assert result.disagreements == []
    assert result.max_copiable_size == dim

    omega = np.exp(2j * np.pi / dim)
    for indices in result.copiable_sets:
        s = bell_set(indices)
        verdict = classify_copiable(s)
        u0 = s.unitaries[0]
        for u, n in zip(s.unitaries, verdict.exponents):
            rotated = dagger(verdict.basis) @ u @ dagger(u0) @ verdict.basis
            pattern = np.diag(omega ** (n * np.arange(dim)))
            np.testing.assert_allclose(rotated, rotated[0, 0] * pattern, atol=1e-8)


@pytest.mark.parametrize("dim", [2, 3])
def test_spectrum_condition_matches_solver_on_pairs(enumerations, dim):
    assert spectrum_condition(pauli_z(dim), dim)
    assert not spectrum_condition(weyl_operator(1, 1, 2), 2)
    for row in enumerations[dim].rows:
        if len(row["indices"]) != 2:
            continue
        s = bell_set(row["indices"])
        t = s.unitaries[1] @ dagger(s.unitaries[0])
        assert spectrum_condition(t, dim, rephase=True) == row["solved"]


@pytest.mark.parametrize("dim", [2, 3, 5])
def test_lemma1_suite(dim):
    rng = np.random.default_rng(dim)
    result = lemma1_property_suite(dim, 1000, rng, tol=1e-8)
    assert result.counterexamples == 0

    xi_tensor = xi_to_lemma_tensor(XiTensor.delta(dim))
    for n in range(dim):
        u = np.diag(np.exp(2j * np.pi * n * np.arange(dim) / dim))
        report = verify_lemma1(u, xi_tensor)
        assert report.satisfies and report.diagonal


@pytest.mark.parametrize("dim", [2, 3])
def test_separable_povm_bound(dim):
    rng = np.random.default_rng(100 + dim)
    states = [bell_state(BellIndex(n, m, dim)) for n in range(dim) for m in range(dim)]
    worst = np.inf
    for _ in range(500):
        povm = random_separable_povm(dim, 50, int(rng.integers(1, dim * dim + 1)), rng)
        report = povm_bound_check(povm, states)
        assert report.violations == 0
        worst = min(worst, report.min_slack)
    assert worst >= -1e-9

    tight = povm_bound_check(SeparablePovm.computational(2), [psi00(2)])
    assert abs(tight.slack[0, 0]) <= 1e-12


def _discrimination_targets(enumerations):
    for dim, result in enumerations.items():
        for row in result.rows:
            if row["ssd"] is not None:
                yield list(row["indices"]), dim
    yield [BellIndex(n, n, 5) for n in range(5)], 5


def test_one_way_discrimination(enumerations):
    checked = 0
    for indices, dim in _discrimination_targets(enumerations):
        result = simulate_discrimination(indices, dim)
        assert max_abs(result.success - np.eye(len(indices))) <= 1e-9
        assert result.channel.kraus_residual <= 1e-10
        for transfer in result.transfers:
            assert max_abs(transfer.rho_a - np.eye(dim) / dim) <= 1e-9
        checked += 1
    assert checked > 10


@pytest.mark.parametrize("dim", [2, 3])
def test_copiable_iff_ssd_normal_form(enumerations, dim):
    for row in enumerations[dim].rows:
        witness = ssd_canonical(row["indices"], dim)
        ssd_copiable = witness is not None and classify_copiable(normal_form_set(witness)).copiable
        assert ssd_copiable == row["copiable"], [idx.label() for idx in row["indices"]]


@pytest.mark.parametrize("dim", [2, 3, 5])
def test_projector_conventions(dim):
    conjugated = build_transfer_channel(dim, np.eye(dim), np.eye(dim), "conjugated-bra")
    literal = build_transfer_channel(dim, np.eye(dim), np.eye(dim), "literal")
    assert conjugated.resolution_residual < 1e-10
    if dim == 2:
        # omega = -1 makes both bras identical
        assert literal.resolution_residual < 1e-10
    else:
        assert literal.resolution_residual > 0.1
