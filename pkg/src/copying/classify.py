"""
구조 판정 모듈

스펙트럼 조건, 소수 차원 복사 가능 집합 분류, 대각성 보조정리 검증,
동시 슈미트 분해(SSD) 판정을 담당한다.
"""
import itertools
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from math import gcd
from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from loguru import logger
from scipy.linalg import schur
from scipy.optimize import least_squares

from config.settings import CLUSTER_TOL, DEFAULT_SEED, DEFAULT_TOL
from src.copying.copy_engine import CopiedSet, XiTensor, check_orthogonality, reduce_to_fundamental
from src.core.tensor_core import (
    BipartiteState,
    ComplexMatrix,
    as_matrix,
    check_tol,
    coefficients_in_frame,
    dagger,
    is_unitary,
    max_abs,
)
from src.core.weyl_basis import (
    BellIndex,
    is_prime,
    mod_inverse,
    pauli_x,
    pauli_z,
    root_exponents,
    weyl_operator,
)
from src.utils.errors import DimensionError, HypothesisError, InvalidSetError, NotUnitaryError

# 고유치 라벨 전수 탐색을 허용하는 최대 차원
MAX_PERMUTATION_DIM = 8


class Caveat(Enum):
    NONE = "none"
    COMPOSITE_DIM_UNPROVEN = "composite-dim-unproven"


@dataclass(frozen=True, eq=False)
class ClassificationVerdict:
    """
    classify_copiable 결과

    copiable 이면 basis 의 a 번째 열 |a> 에 대해 basis^dagger U_j basis = e^{i phi_j} diag(omega^{n_j a}).
    basis 와 exponents 는 기본형으로 줄인 집합 U_j U_0^dagger 기준이다.
    """

    copiable: bool
    basis: Optional[ComplexMatrix] = field(default=None, repr=False)
    exponents: Optional[Tuple[int, ...]] = None
    caveat: Caveat = Caveat.NONE
    reason: str = ""


@dataclass(frozen=True, eq=False)
class SsdWitness:
    """
    SSD 증거

    basis_a, basis_b 의 열이 {|e_k>}, {|f_k>} 이고 coefficients[alpha, k] = b_k^{(alpha)}.
    정준 인덱스 경로에서는 (p, q, r) 와 정규형 U_alpha ∝ left · generator^{powers[alpha]} · right 를 함께 담는다.
    """

    dim: int
    basis_a: ComplexMatrix = field(repr=False)
    basis_b: ComplexMatrix = field(repr=False)
    coefficients: npt.NDArray[np.complex128] = field(repr=False)
    p: Optional[int] = None
    q: Optional[int] = None
    r: Optional[int] = None
    generator: Optional[ComplexMatrix] = field(default=None, repr=False)
    left: Optional[ComplexMatrix] = field(default=None, repr=False)
    right: Optional[ComplexMatrix] = field(default=None, repr=False)
    powers: Optional[Tuple[int, ...]] = None

    @property
    def triple(self) -> Optional[Tuple[int, int, int]]:
        if self.p is None or self.q is None or self.r is None:
            return None
        return (self.p, self.q, self.r)


@dataclass(frozen=True)
class Lemma1Report:
    """대각성 보조정리 검증 결과 (satisfies 이고 vacuous 가 아니면 diagonal 이어야 consistent)"""

    satisfies: bool
    diagonal: bool
    vacuous: bool
    residual: float
    offdiagonal: float

    @property
    def consistent(self) -> bool:
        return not self.satisfies or self.vacuous or self.diagonal


@dataclass(frozen=True)
class Lemma1SuiteResult:
    dim: int
    trials: int
    satisfied: int
    counterexamples: int
    relaxed_solutions: int = 0


def spectrum_condition(t: ComplexMatrix, dim: int, tol: float = DEFAULT_TOL, rephase: bool = False) -> bool:
    """
    T 의 스펙트럼이 M | D 인 M 차 단위근 전체이고 각 고유값의 중복도가 같은지

    Args:
        t: 유니터리 T
        dim: 국소 차원 D
        tol: 유니터리 판정 허용오차
        rephase: True 이면 첫 고유값을 1 로 맞춰 전역 위상 하나를 제거한 뒤 판정

    Raises:
        NotUnitaryError: T 가 유니터리가 아닌 경우
    """
    t = as_matrix(t)
    if t.shape != (dim, dim):
        raise DimensionError(f"T 크기 {t.shape} 가 D={dim} 과 맞지 않습니다.")
    if not is_unitary(t, max(check_tol(tol), 10 * DEFAULT_TOL)):
        raise NotUnitaryError("T 가 유니터리가 아닙니다.")

    eigs = np.linalg.eigvals(t)
    if rephase:
        eigs = eigs / (eigs[0] / abs(eigs[0]))
    exps = root_exponents(eigs, dim, CLUSTER_TOL)
    if exps is None:
        logger.debug("스펙트럼 조건 실패: D 차 단위근이 아닌 고유값")
        return False

    values, counts = np.unique(exps, return_counts=True)
    order = len(values)
    if dim % order:
        return False
    step = dim // order
    # 서로 다른 고유값은 M 차 단위근 부분군 전체를 이뤄야 한다
    if sorted(values.tolist()) != list(range(0, dim, step)):
        return False
    return bool(np.all(counts == counts[0]))


def _cluster(values: npt.NDArray[np.float64], tol: float) -> List[List[int]]:
    """정렬된 실수 배열을 간격 tol 미만으로 묶음"""
    groups: List[List[int]] = [[0]]
    for i in range(1, len(values)):
        if values[i] - values[i - 1] < tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _random_hermitian(mats: Sequence[ComplexMatrix], rng: np.random.Generator) -> ComplexMatrix:
    # 에르미트 부분과 반에르미트 부분의 무작위 실계수 결합
    h = np.zeros_like(mats[0])
    for m in mats:
        c, d = rng.standard_normal(2)
        h = h + c * (m + dagger(m)) / 2 + d * (m - dagger(m)) / 2j
    return (h + dagger(h)) / 2


def simultaneous_eigenbasis(
    mats: Sequence[ComplexMatrix],
    seed: int = DEFAULT_SEED,
    cluster_tol: float = CLUSTER_TOL,
    max_depth: int = 4
) -> ComplexMatrix:
    """
    서로 가환인 정규 행렬들의 공통 고유기저

    무작위 결합의 고유분해 뒤, 간격이 cluster_tol 미만인 축퇴 블록마다 새 무작위 결합으로 다시 분해한다.
    가환이 아니면 반환된 기저에서 대각이 아니므로 호출자가 확인해야 한다.
    """
    mats = [as_matrix(m) for m in mats]
    dim = mats[0].shape[0]
    rng = np.random.default_rng(seed)

    def refine(vecs: ComplexMatrix, depth: int) -> ComplexMatrix:
        if vecs.shape[1] == 1 or depth > max_depth:
            return vecs
        sub = [dagger(vecs) @ m @ vecs for m in mats]
        evals, evecs = np.linalg.eigh(_random_hermitian(sub, rng))
        groups = _cluster(evals, cluster_tol)
        if len(groups) == 1 and depth > 0:
            # 모든 행렬이 이 블록에서 스칼라
            return vecs
        blocks = [refine(vecs @ evecs[:, g], depth + 1) for g in groups]
        return np.hstack(blocks)

    return refine(np.eye(dim, dtype=np.complex128), 0)


def _relabel(exps: List[npt.NDArray[np.int64]], dim: int) -> Optional[Tuple[List[int], List[int]]]:
    """
    열 k 의 라벨 L(k) 와 지수 n_j 를 찾아 exps[j][k] == n_j * L(k) (mod D) 를 만족시킴

    완전 스펙트럼 기준 원소가 있으면 라벨 1 을 받을 열만 고르고, 없으면 작은 D 에서 순열을 전수 탐색한다.
    """
    reference = next((e for e in exps if len(set(e.tolist())) == dim), None)

    def check(labels: Sequence[int], k1: int) -> Optional[Tuple[List[int], List[int]]]:
        ns = [int(e[k1]) for e in exps]
        for e, n in zip(exps, ns):
            if any(int(e[k]) != (n * labels[k]) % dim for k in range(dim)):
                return None
        return list(labels), ns

    if reference is not None:
        # 가장 작은 가역 지수의 열을 라벨 1 로 (Z 자체는 n = 1)
        for k1 in sorted(range(1, dim), key=lambda k: int(reference[k])):
            n_ref = int(reference[k1])
            if gcd(n_ref, dim) != 1:
                continue
            inv = mod_inverse(n_ref, dim)
            labels = [(int(reference[k]) * inv) % dim for k in range(dim)]
            found = check(labels, k1)
            if found is not None:
                return found
        return None

    if all(not e.any() for e in exps):
        return list(range(dim)), [0] * len(exps)
    if dim > MAX_PERMUTATION_DIM:
        logger.warning(f"완전 스펙트럼 원소가 없고 D={dim} 이 커서 라벨 전수 탐색을 생략합니다.")
        return None
    for perm in itertools.permutations(range(1, dim)):
        labels = [0] + list(perm)
        found = check(labels, labels.index(1))
        if found is not None:
            return found
    return None


def classify_copiable(
    copied_set: CopiedSet,
    tol: float = DEFAULT_TOL,
    seed: int = DEFAULT_SEED
) -> ClassificationVerdict:
    """
    공통 기저 {|a>} 와 지수 n_j 로 U_j = sum_a omega^{n_j a}|a><a| (위상 제외) 인지 판정

    Args:
        copied_set: 복사 집합
        tol: 허용오차
        seed: 공통 고유기저 계산의 난수 시드

    Returns:
        ClassificationVerdict: 실패 시 reason 에 단계 설명

    Raises:
        InvalidSetError: 기본형이 직교 조건을 만족하지 않는 경우
    """
    tol = check_tol(tol)
    dim = copied_set.dim
    fundamental = reduce_to_fundamental(copied_set)
    if not check_orthogonality(fundamental, tol):
        raise InvalidSetError("복사 집합이 직교 조건을 만족하지 않습니다.")
    us = fundamental.unitaries
    loose = max(10 * tol, 10 * DEFAULT_TOL)

    def fail(reason: str) -> ClassificationVerdict:
        logger.info(f"복사 불가: {reason}")
        return ClassificationVerdict(copiable=False, reason=reason)

    for j, k in itertools.combinations(range(len(us)), 2):
        if max_abs(us[j] @ us[k] - us[k] @ us[j]) > loose:
            return fail(f"U_{j} 와 U_{k} 가 가환이 아닙니다.")

    basis = simultaneous_eigenbasis(us, seed=seed)
    diagonals = []
    for j, u in enumerate(us):
        rotated = dagger(basis) @ u @ basis
        off = rotated - np.diag(np.diag(rotated))
        if max_abs(off) > loose:
            return fail(f"U_{j} 가 공통 고유기저에서 대각이 아닙니다.")
        d = np.diag(rotated)
        diagonals.append(d / (d[0] / abs(d[0])))

    exps = []
    for j, d in enumerate(diagonals):
        e = root_exponents(d, dim, CLUSTER_TOL)
        if e is None:
            return fail(f"U_{j} 의 고유값이 D 차 단위근이 아닙니다.")
        exps.append(e)

    found = _relabel(exps, dim)
    if found is None:
        return fail("omega^{n a} 형태가 되는 기저 라벨이 없습니다.")
    labels, ns = found
    ordered = np.zeros_like(basis)
    for k, a in enumerate(labels):
        ordered[:, a] = basis[:, k]

    caveat = Caveat.NONE if is_prime(dim) else Caveat.COMPOSITE_DIM_UNPROVEN
    if caveat is Caveat.COMPOSITE_DIM_UNPROVEN:
        logger.warning(f"D={dim} 은 소수가 아니어서 충분조건 방향이 증명되지 않았습니다.")
    logger.info(f"복사 가능: D={dim}, 지수 {ns}")
    return ClassificationVerdict(
        copiable=True,
        basis=ordered,
        exponents=tuple(ns),
        caveat=caveat,
        reason="공통 기저에서 Z 거듭제곱 형태",
    )


def _check_lemma_hypothesis(xi_tensor: npt.NDArray[np.complex128], dim: int, tol: float) -> None:
    eye = np.eye(dim)
    for c in range(dim):
        if max_abs(xi_tensor[c, c] - eye) > tol:
            raise HypothesisError(f"Xi^{{{c}{c}}}_{{b1 b2}} 가 delta_{{b1 b2}} 가 아닙니다.")


@lru_cache(maxsize=None)
def _lemma_indices(dim: int) -> Tuple[npt.NDArray[np.int64], ...]:
    a1, a2, b1, b2 = np.meshgrid(*(np.arange(dim),) * 4, indexing="ij")
    return a1, a2, b1, b2, (a1 + b1) % dim, (a2 + b2) % dim


def _lemma_residual(u: ComplexMatrix, xi_arr: npt.NDArray[np.complex128]) -> npt.NDArray[np.complex128]:
    a1, a2, b1, b2, s1, s2 = _lemma_indices(u.shape[0])
    return xi_arr[s1, s2, b1, b2] * u[s1, s2] - u[a1, a2] * u[b1, b2]


def _relaxed_solution(xi_arr: npt.NDArray[np.complex128], dim: int, rng: np.random.Generator) -> ComplexMatrix:
    """
    U_00 = 1 로 고정하고 나머지 성분을 무작위 시작점에서 최소제곱으로 풀어 얻은 후보

    대각 지표를 미리 넣지 않으므로 방정식의 해를 직접 찾아 대각성을 확인하는 용도로 쓴다.
    """
    free = dim * dim - 1

    def unpack(x: npt.NDArray[np.float64]) -> ComplexMatrix:
        return np.concatenate([[1.0 + 0j], x[:free] + 1j * x[free:]]).reshape(dim, dim)

    def residuals(x: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        r = _lemma_residual(unpack(x), xi_arr).ravel()
        return np.concatenate([r.real, r.imag])

    x0 = rng.standard_normal(2 * free)
    fit = least_squares(residuals, x0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
    return unpack(fit.x)


def verify_lemma1(u: ComplexMatrix, xi_tensor: npt.ArrayLike, tol: float = DEFAULT_TOL) -> Lemma1Report:
    """
    Xi^{a1+b1, a2+b2}_{b1 b2} U_{a1+b1, a2+b2} = U_{a1 a2} U_{b1 b2} (덧셈은 mod D) 검사

    Args:
        u: D x D 행렬
        xi_tensor: xi_tensor[a1, a2, b1, b2] = Xi^{a1 a2}_{b1 b2}
        tol: 허용오차 (대각성은 10*tol 로 판정)

    Raises:
        HypothesisError: Xi^{cc}_{b1 b2} != delta_{b1 b2}
    """
    tol = check_tol(tol)
    u = as_matrix(u)
    dim = u.shape[0]
    xi_arr = np.asarray(xi_tensor, dtype=np.complex128)
    if u.shape != (dim, dim) or xi_arr.shape != (dim,) * 4:
        raise DimensionError(f"U {u.shape} 와 Xi {xi_arr.shape} 크기가 맞지 않습니다.")
    _check_lemma_hypothesis(xi_arr, dim, max(tol, 10 * DEFAULT_TOL))

    residual = max_abs(_lemma_residual(u, xi_arr))
    offdiagonal = max_abs(u - np.diag(np.diag(u)))
    return Lemma1Report(
        satisfies=residual <= tol,
        diagonal=offdiagonal <= 10 * tol,
        vacuous=max_abs(u) <= tol,
        residual=residual,
        offdiagonal=offdiagonal,
    )


def xi_to_lemma_tensor(xi: XiTensor) -> npt.NDArray[np.complex128]:
    """Xi^{a1 a2}_{b1 b2} = sum_b xi^{a1}_{b b1} conj(xi^{a2}_{b b2})"""
    return np.einsum("xbp,ybq->xypq", xi.entries, xi.entries.conj())


def lemma1_property_suite(
    dim: int,
    trials: int,
    rng: np.random.Generator,
    tol: float = 1e-8
) -> Lemma1SuiteResult:
    """
    무작위 / 지표 대각 / 섭동 / 수치해 입력을 섞어 보조정리의 반례 수를 셈

    네 종류를 번갈아 사용한다. 무작위 U 와 u_a = omega^{n a} 인 대각 U, 대각 U 에 비대각 섭동을 더한 U,
    그리고 주어진 Xi 에 대해 최소제곱으로 직접 푼 U (_relaxed_solution) 이다.
    마지막 종류는 방정식을 만족하는 U 를 미리 정하지 않으므로 비대각 해가 있으면 반례로 잡힌다.
    Xi 는 매번 무작위 유니터리 슬라이스 xi 에서 만든다.
    """
    satisfied = 0
    counterexamples = 0
    relaxed_solutions = 0
    for trial in range(trials):
        xi = XiTensor.random(dim, rng)
        xi_tensor = xi_to_lemma_tensor(xi)
        n = int(rng.integers(dim))
        character = np.diag(np.exp(2j * np.pi * n * np.arange(dim) / dim))
        kind = trial % 4
        if kind == 0:
            u = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        elif kind == 1:
            u = character
        elif kind == 2:
            u = character.astype(np.complex128)
            i, j = rng.choice(dim, size=2, replace=False)
            u[i, j] += 10 ** rng.uniform(-4, -1)
        else:
            u = _relaxed_solution(xi_tensor, dim, rng)
        report = verify_lemma1(u, xi_tensor, tol)
        satisfied += int(report.satisfies)
        if kind == 3 and report.satisfies:
            relaxed_solutions += 1
        if not report.consistent:
            counterexamples += 1
            logger.warning(f"보조정리 반례: trial={trial}, residual={report.residual:.3e}")
    logger.info(
        f"보조정리 검증 D={dim}: {trials}회 중 방정식 만족 {satisfied} (수치해 {relaxed_solutions}), 반례 {counterexamples}"
    )
    return Lemma1SuiteResult(dim, trials, satisfied, counterexamples, relaxed_solutions)


def _canonical_triple(indices: Sequence[BellIndex], dim: int) -> Optional[Tuple[int, int, int]]:
    for p, q, r in itertools.product(range(dim), repeat=3):
        if p == 0 and q == 0:
            continue
        if all((p * idx.n + q * idx.m) % dim == r for idx in indices):
            return p, q, r
    return None


def ssd_canonical(indices: Sequence[BellIndex], dim: int, tol: float = DEFAULT_TOL) -> Optional[SsdWitness]:
    """
    p n_alpha + q m_alpha = r (mod D) 를 만족하는 (p, q, r) 를 사전식 순서로 탐색

    q 가 가역이면 m = f n + g 로 U_alpha ∝ (Z X^f)^{n_alpha} X^g,
    아니고 p 가 가역이면 n = f' m + g' 로 U_alpha ∝ Z^{g'} (Z^{f'} X)^{m_alpha} 인 정규형을 함께 만든다.
    둘 다 가역이 아니면 (합성수 D) 정규형 없이 ssd_general 의 틀을 사용한다.

    Returns:
        SsdWitness 또는 None

    Raises:
        InvalidSetError: 인덱스가 비었거나 중복된 경우
    """
    if not indices:
        raise InvalidSetError("빈 Bell 인덱스 리스트입니다.")
    if len(set(indices)) != len(indices):
        raise InvalidSetError("Bell 인덱스가 중복되었습니다.")
    if any(idx.dim != dim for idx in indices):
        raise DimensionError(f"Bell 인덱스의 차원이 D={dim} 과 다릅니다.")

    triple = _canonical_triple(indices, dim)
    if triple is None:
        logger.info(f"SSD 아님: D={dim}, {[i.label() for i in indices]}")
        return None
    p, q, r = triple
    logger.debug(f"SSD 삼중항 (p, q, r) = {triple}")

    states = [BipartiteState.from_coefficients(weyl_operator(i.n, i.m, dim) / np.sqrt(dim)) for i in indices]
    eye = np.eye(dim, dtype=np.complex128)
    if gcd(q, dim) == 1:
        q_inv = mod_inverse(q, dim)
        f, g = (-p * q_inv) % dim, (r * q_inv) % dim
        left = eye
        generator = pauli_z(dim) @ np.linalg.matrix_power(pauli_x(dim), f)
        right = np.linalg.matrix_power(pauli_x(dim), g)
        powers = tuple(idx.n for idx in indices)
    elif gcd(p, dim) == 1:
        p_inv = mod_inverse(p, dim)
        f, g = (-q * p_inv) % dim, (r * p_inv) % dim
        left = np.linalg.matrix_power(pauli_z(dim), g)
        generator = np.linalg.matrix_power(pauli_z(dim), f) @ pauli_x(dim)
        right = eye
        powers = tuple(idx.m for idx in indices)
    else:
        frame = ssd_general(states, tol)
        if frame is None:
            return None
        return SsdWitness(dim, frame.basis_a, frame.basis_b, frame.coefficients, p=p, q=q, r=r)

    _, v = schur(generator, output="complex")
    basis_a = left @ v
    basis_b = right.T @ v.conj()
    coefficients = _diagonal_coefficients(states, basis_a, basis_b, tol)
    if coefficients is None:
        logger.error("정규형 틀에서 상태가 대각이 아닙니다.")
        return None
    return SsdWitness(
        dim,
        basis_a,
        basis_b,
        coefficients,
        p=p,
        q=q,
        r=r,
        generator=generator,
        left=left,
        right=right,
        powers=powers,
    )


def normal_form_set(witness: SsdWitness) -> CopiedSet:
    """정규형 {left · generator^k · right} 의 CopiedSet"""
    if witness.generator is None or witness.powers is None:
        raise InvalidSetError("정규형이 없는 SSD 증거입니다.")
    return CopiedSet(
        witness.dim,
        tuple(
            witness.left @ np.linalg.matrix_power(witness.generator, k) @ witness.right
            for k in witness.powers
        ),
    )


def _diagonal_coefficients(
    states: Sequence[BipartiteState],
    basis_a: ComplexMatrix,
    basis_b: ComplexMatrix,
    tol: float
) -> Optional[npt.NDArray[np.complex128]]:
    rows = []
    for state in states:
        c = coefficients_in_frame(state, basis_a, basis_b)
        mask = 1.0 - np.eye(*c.shape)
        if max_abs(c * mask) > 10 * tol:
            return None
        rows.append(np.diag(c))
    return np.array(rows)


def _candidate_frames(states: Sequence[BipartiteState], tol: float) -> List[Tuple[str, ComplexMatrix, ComplexMatrix]]:
    dim_a, dim_b = states[0].dim_a, states[0].dim_b
    frames = [("computational", np.eye(dim_a, dtype=np.complex128), np.eye(dim_b, dtype=np.complex128))]

    for i, state in enumerate(states):
        u, s, vh = np.linalg.svd(state.coefficients())
        if np.all(np.diff(s) < -CLUSTER_TOL):
            frames.append((f"schmidt[{i}]", u, vh.T))

    if dim_a == dim_b:
        m0 = states[0].coefficients()
        if np.linalg.svd(m0, compute_uv=False)[-1] > CLUSTER_TOL:
            m0_inv = np.linalg.inv(m0)
            relative = [s.coefficients() @ m0_inv for s in states[1:]] or [np.eye(dim_a, dtype=np.complex128)]
            e = simultaneous_eigenbasis(relative)
            conj_f = dagger(m0) @ e
            conj_f = conj_f / np.linalg.norm(conj_f, axis=0)
            frames.append(("relative", e, conj_f.conj()))
    return frames


def ssd_general(states: Sequence[BipartiteState], tol: float = DEFAULT_TOL) -> Optional[SsdWitness]:
    """
    일반 상태 집합의 SSD 증거 탐색 (충분조건 판정)

    계산 기저, 축퇴 없는 슈미트 스펙트럼을 가진 각 상태의 슈미트 틀,
    상대 연산자 M_alpha M_0^{-1} 의 공통 고유기저 틀을 차례로 시도한다.

    Returns:
        SsdWitness 또는 None (None 은 "증거 없음" 이며 SSD 가 아니라는 증명이 아님)

    Raises:
        DimensionError: 빈 리스트이거나 상태들의 차원이 다른 경우
    """
    tol = check_tol(tol)
    if not states:
        raise DimensionError("상태 리스트가 비어 있습니다.")
    dims = {(s.dim_a, s.dim_b) for s in states}
    if len(dims) != 1:
        raise DimensionError(f"상태들의 국소 차원이 서로 다릅니다: {sorted(dims)}")

    for name, basis_a, basis_b in _candidate_frames(states, tol):
        coefficients = _diagonal_coefficients(states, basis_a, basis_b, tol)
        if coefficients is not None:
            logger.debug(f"SSD 틀 발견: {name}")
            return SsdWitness(states[0].dim_a, basis_a, basis_b, coefficients)
    logger.info("SSD 증거 없음 (시도한 틀에서 모두 비대각)")
    return None
