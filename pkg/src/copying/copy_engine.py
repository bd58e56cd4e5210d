"""
LOCC 복사 엔진 모듈

복사 조건 A (T_jj' ⊗ I) A^dagger = e^{i(theta_j - theta_j')} (T_jj' ⊗ T_jj') 검사,
명시적 복사기 합성, 일반 복사기 탐색, 4-와이어 복사 프로토콜 시뮬레이션을 담당한다.
전역 공간 순서는 H1 ⊗ H2 ⊗ H3 ⊗ H4 이고 Alice 는 H1 ⊗ H3, Bob 은 H2 ⊗ H4 를 가진다.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from loguru import logger
from scipy.linalg import polar
from scipy.stats import unitary_group

from config.settings import CLUSTER_TOL, DEFAULT_ATTEMPTS, DEFAULT_SEED, DEFAULT_TOL, NULLSPACE_RCOND
from src.core.tensor_core import (
    BipartiteState,
    ComplexMatrix,
    as_matrix,
    check_tol,
    common_nullspace,
    dagger,
    is_unitary,
    kron,
    max_abs,
    overlap_fidelity,
    partial_trace,
)
from src.core.weyl_basis import (
    bell_indices,
    bell_state,
    fourier_matrix,
    has_full_spectrum,
    is_prime,
    state_from_unitary,
)
from src.utils.errors import DimensionError, InvalidSetError, InvalidStateError, InvalidXiError, NotUnitaryError


@dataclass(frozen=True, eq=False)
class CopiedSet:
    """복사 대상 집합 {(U_j ⊗ I)|Psi_00>} 을 정의하는 유니터리 리스트"""

    dim: int
    unitaries: Tuple[ComplexMatrix, ...]
    phases: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if not self.unitaries:
            raise InvalidSetError("복사 집합이 비어 있습니다.")
        mats = tuple(as_matrix(u) for u in self.unitaries)
        for j, u in enumerate(mats):
            if u.shape != (self.dim, self.dim):
                raise DimensionError(f"U_{j} 크기 {u.shape} 가 D={self.dim} 과 맞지 않습니다.")
            if not is_unitary(u, 10 * DEFAULT_TOL):
                raise NotUnitaryError(f"U_{j} 가 유니터리가 아닙니다.")
        if self.phases is not None and len(self.phases) != len(mats):
            raise InvalidSetError(f"위상 개수 {len(self.phases)} 가 원소 개수 {len(mats)} 와 다릅니다.")
        object.__setattr__(self, "unitaries", mats)

    def __len__(self) -> int:
        return len(self.unitaries)

    def states(self) -> List[BipartiteState]:
        return [state_from_unitary(u, self.dim) for u in self.unitaries]


@dataclass(frozen=True, eq=False)
class XiTensor:
    """복사기 A 를 결정하는 텐서 xi^a_{b,c} (entries[a, b, c])"""

    dim: int
    entries: npt.NDArray[np.complex128] = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.complex128)
        if arr.shape != (self.dim,) * 3:
            raise InvalidXiError(f"xi 텐서 크기 {arr.shape} 가 ({self.dim},{self.dim},{self.dim}) 이 아닙니다.")
        object.__setattr__(self, "entries", arr)

    def is_valid(self, tol: float = DEFAULT_TOL) -> bool:
        """a 를 고정한 (b, c) 슬라이스가 모두 유니터리인지"""
        return all(is_unitary(self.entries[a], tol) for a in range(self.dim))

    @classmethod
    def delta(cls, dim: int) -> "XiTensor":
        """xi^a_{b,c} = delta_{b,c}"""
        return cls(dim, np.broadcast_to(np.eye(dim), (dim, dim, dim)).copy())

    @classmethod
    def fourier(cls, dim: int) -> "XiTensor":
        """모든 슬라이스가 이산 푸리에 행렬"""
        return cls(dim, np.broadcast_to(fourier_matrix(dim), (dim, dim, dim)).copy())

    @classmethod
    def random(cls, dim: int, rng: np.random.Generator) -> "XiTensor":
        """Haar 무작위 유니터리 슬라이스"""
        return cls(dim, np.stack([unitary_group.rvs(dim, random_state=rng) for _ in range(dim)]))


@dataclass(frozen=True, eq=False)
class CopierCertificate:
    """복사 조건 검사 결과 (valid 가 False 이면 실패 보고)"""

    a: ComplexMatrix = field(repr=False)
    blank: Optional[BipartiteState]
    residual: float
    fitted_phases: Tuple[float, ...]
    valid: bool
    copied_set: CopiedSet = field(repr=False)


@dataclass(frozen=True, eq=False)
class CopierSearchResult:
    """solve_copier 결과"""

    success: bool
    certificate: Optional[CopierCertificate]
    nullspace_dim: int
    attempts_used: int
    unproven_regime: bool


def check_orthogonality(copied_set: CopiedSet, tol: float = DEFAULT_TOL) -> bool:
    """
    |Tr(U_j U_j'^dagger)| <= D*eps (j != j') 와 |Tr(U_j U_j^dagger) - D| <= D*eps 확인
    """
    tol = check_tol(tol)
    dim = copied_set.dim
    us = copied_set.unitaries
    for j, u in enumerate(us):
        for k, v in enumerate(us):
            overlap = np.trace(u @ dagger(v))
            target = dim if j == k else 0.0
            if abs(overlap - target) > dim * tol:
                logger.debug(f"직교성 위반: Tr(U_{j} U_{k}^dagger) = {overlap:.6g}")
                return False
    return True


def reduce_to_fundamental(copied_set: CopiedSet) -> CopiedSet:
    """U_j -> U_j U_0^dagger (첫 원소가 항등원), 위상 정보는 지움"""
    u0_dag = dagger(copied_set.unitaries[0])
    return CopiedSet(copied_set.dim, tuple(u @ u0_dag for u in copied_set.unitaries))


def _fit_phase(lhs: ComplexMatrix, rhs: ComplexMatrix) -> complex:
    idx = np.unravel_index(np.argmax(np.abs(rhs)), rhs.shape)
    ratio = lhs[idx] / rhs[idx]
    return complex(ratio / abs(ratio)) if abs(ratio) > 0 else 1.0 + 0j


def _check_copier_shape(a: ComplexMatrix, dim: int, tol: float) -> ComplexMatrix:
    a = as_matrix(a)
    if a.shape != (dim * dim, dim * dim):
        raise DimensionError(f"복사기 크기 {a.shape} 가 D^2={dim * dim} 과 맞지 않습니다.")
    if not is_unitary(a, max(tol, 10 * DEFAULT_TOL)):
        raise NotUnitaryError("복사기 A 가 유니터리가 아닙니다.")
    return a


def check_copier_condition(
    a: ComplexMatrix,
    copied_set: CopiedSet,
    tol: float = DEFAULT_TOL,
    search_blank: bool = True
) -> CopierCertificate:
    """
    A (T_jj' ⊗ I) A^dagger = e^{i(theta_j - theta_j')} (T_jj' ⊗ T_jj') 검사

    theta_j - theta_0 는 T_j0 ⊗ T_j0 의 최대 크기 성분에서 A (T_j0 ⊗ I) A^dagger 와의 비로 맞춘다.

    Args:
        a: D^2 x D^2 유니터리 후보
        copied_set: 복사 집합
        tol: 허용오차
        search_blank: 성공 시 blank 상태를 찾을지 여부

    Returns:
        CopierCertificate: residual <= tol 이면 valid

    Raises:
        DimensionError: 크기 불일치
        NotUnitaryError: A 가 유니터리가 아닌 경우
    """
    tol = check_tol(tol)
    dim = copied_set.dim
    a = _check_copier_shape(a, dim, tol)
    a_dag = dagger(a)
    eye = np.eye(dim)

    u0_dag = dagger(copied_set.unitaries[0])
    phases = []
    for u in copied_set.unitaries:
        t = u @ u0_dag
        phases.append(_fit_phase(a @ kron(t, eye) @ a_dag, kron(t, t)))

    residual = 0.0
    for j, uj in enumerate(copied_set.unitaries):
        for k, uk in enumerate(copied_set.unitaries):
            t = uj @ dagger(uk)
            lhs = a @ kron(t, eye) @ a_dag
            rhs = phases[j] * np.conj(phases[k]) * kron(t, t)
            residual = max(residual, max_abs(lhs - rhs))

    thetas = tuple(float(np.angle(p)) for p in phases)
    valid = residual <= tol
    blank = find_blank(a, copied_set, tol) if valid and search_blank else None
    logger.debug(f"복사 조건 잔차: {residual:.3e} ({'성공' if valid else '실패'})")
    return CopierCertificate(a, blank, float(residual), thetas, valid, copied_set)


def build_copier(dim: int, xi: XiTensor, tol: float = DEFAULT_TOL) -> ComplexMatrix:
    """
    A = sum_{a,b,c} xi^a_{b,c} |a - c>|c><a|<b| 생성

    Raises:
        InvalidXiError: xi 슬라이스가 유니터리가 아닌 경우
    """
    if xi.dim != dim:
        raise InvalidXiError(f"xi 차원 {xi.dim} 이 D={dim} 과 다릅니다.")
    if not xi.is_valid(tol):
        raise InvalidXiError("xi 의 (b, c) 슬라이스가 유니터리가 아닙니다.")
    a_idx, b_idx, c_idx = np.meshgrid(np.arange(dim), np.arange(dim), np.arange(dim), indexing="ij")
    rows = ((a_idx - c_idx) % dim) * dim + c_idx
    cols = a_idx * dim + b_idx
    a = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
    a[rows.ravel(), cols.ravel()] = xi.entries.ravel()
    return a


def wire_permutation(dim: int) -> ComplexMatrix:
    """H1⊗H2⊗H3⊗H4 순서의 벡터를 (H1⊗H3)⊗(H2⊗H4) 순서로 바꾸는 치환 행렬"""
    n = dim ** 4
    order = np.arange(n).reshape(dim, dim, dim, dim).transpose(0, 2, 1, 3).reshape(-1)
    perm = np.zeros((n, n), dtype=np.complex128)
    perm[np.arange(n), order] = 1.0
    return perm


def apply_local_copier(a: ComplexMatrix, vec: npt.ArrayLike, dim: int) -> npt.NDArray[np.complex128]:
    """
    A^{13} ⊗ conj(A)^{24} 를 H1⊗H2⊗H3⊗H4 상태 벡터에 적용

    와이어를 (1,3,2,4) 로 재배열한 계수 행렬 C 에 대해 (A ⊗ conj A) vec(C) = vec(A C A^dagger).
    """
    vec = np.asarray(vec, dtype=np.complex128)
    if vec.size != dim ** 4:
        raise DimensionError(f"상태 길이 {vec.size} 가 D^4={dim ** 4} 가 아닙니다.")
    c = vec.reshape(dim, dim, dim, dim).transpose(0, 2, 1, 3).reshape(dim * dim, dim * dim)
    c = a @ c @ dagger(a)
    return c.reshape(dim, dim, dim, dim).transpose(0, 2, 1, 3).reshape(-1)


def copy_fidelities(a: ComplexMatrix, blank: BipartiteState, copied_set: CopiedSet) -> List[float]:
    """각 |Psi_j>^{12} ⊗ |b>^{34} 에 복사기를 적용한 결과와 |Psi_j>|Psi_j> 의 충실도"""
    dim = copied_set.dim
    if (blank.dim_a, blank.dim_b) != (dim, dim):
        raise DimensionError(f"blank 차원 ({blank.dim_a},{blank.dim_b}) 이 D={dim} 과 맞지 않습니다.")
    a = as_matrix(a)
    if a.shape != (dim * dim, dim * dim):
        raise DimensionError(f"복사기 크기 {a.shape} 가 D^2={dim * dim} 과 맞지 않습니다.")
    fidelities = []
    for state in copied_set.states():
        psi = state.amplitudes
        out = apply_local_copier(a, np.kron(psi, blank.amplitudes), dim)
        fidelities.append(overlap_fidelity(np.kron(psi, psi), out))
    return fidelities


def _analytic_blank(a: ComplexMatrix, copied_set: CopiedSet, tol: float) -> Optional[BipartiteState]:
    # A^dagger (U_0 ⊗ U_0) A 가 U_0 ⊗ B 로 분해될 때의 B
    dim = copied_set.dim
    u0 = copied_set.unitaries[0]
    m = dagger(a) @ kron(u0, u0) @ a
    b = partial_trace(kron(dagger(u0), np.eye(dim)) @ m, [dim, dim], keep={1}) / dim
    if max_abs(m - kron(u0, b)) > 10 * tol or np.linalg.norm(b) == 0:
        return None
    return BipartiteState.from_coefficients(b, normalize=True)


def find_blank(a: ComplexMatrix, copied_set: CopiedSet, tol: float = DEFAULT_TOL) -> Optional[BipartiteState]:
    """
    복사기 A 와 짝이 되는 blank 상태 탐색

    Psi_00 부터 D^2 개의 Bell 상태를 순서대로 시험하고, 모두 실패하면 해석적 후보를 시험한다.

    Returns:
        BipartiteState 또는 None: 모든 충실도가 1 - 10*tol 이상인 첫 blank
    """
    threshold = 1.0 - 10 * tol
    for idx in bell_indices(copied_set.dim):
        blank = bell_state(idx)
        if min(copy_fidelities(a, blank, copied_set)) >= threshold:
            logger.debug(f"blank 확인: Psi_{idx.n}{idx.m}")
            return blank
    blank = _analytic_blank(a, copied_set, tol)
    if blank is not None and min(copy_fidelities(a, blank, copied_set)) >= threshold:
        logger.debug("blank 확인: 해석적 후보")
        return blank
    logger.warning("복사 조건을 만족하지만 검증된 blank 상태를 찾지 못했습니다.")
    return None


def simulate_copy(cert: CopierCertificate, copied_set: Optional[CopiedSet] = None) -> List[float]:
    """
    인증서의 복사기와 blank 로 전체 복사 프로토콜을 시뮬레이션

    Returns:
        List[float]: 상태별 복사 충실도

    Raises:
        InvalidStateError: 인증서에 blank 가 없는 경우
        DimensionError: 차원 불일치
    """
    target = copied_set if copied_set is not None else cert.copied_set
    if cert.blank is None:
        raise InvalidStateError("인증서에 blank 상태가 없습니다.")
    return copy_fidelities(cert.a, cert.blank, target)


def trace_identity_residual(cert: CopierCertificate) -> float:
    """
    복사 조건의 양변 대각합: |D Tr(T) - e^{i dtheta} Tr(T)^2| 의 최대값

    유효한 인증서라면 j != j' 에서 Tr(T_jj') = 0 (직교성) 이 따라 나온다.
    """
    copied_set = cert.copied_set
    dim = copied_set.dim
    phases = np.exp(1j * np.asarray(cert.fitted_phases))
    residual = 0.0
    for j, uj in enumerate(copied_set.unitaries):
        for k, uk in enumerate(copied_set.unitaries):
            tr = np.trace(uj @ dagger(uk))
            residual = max(residual, abs(dim * tr - phases[j] * np.conj(phases[k]) * tr ** 2))
    return float(residual)


def intertwiner_map(u: ComplexMatrix) -> ComplexMatrix:
    """vec(A) -> vec(A (U ⊗ I) - (U ⊗ U) A) 의 행렬 (행 우선 vec)"""
    dim = u.shape[0]
    eye = np.eye(dim * dim)
    return kron(eye, kron(u, np.eye(dim)).T) - kron(kron(u, u), eye)


def canonical_rephasings(u: ComplexMatrix, tol: float = CLUSTER_TOL) -> List[complex]:
    """U 의 서로 다른 고유값 하나를 1 로 만드는 위상 인자들"""
    phases: List[complex] = []
    for lam in np.linalg.eigvals(u):
        if all(abs(lam - np.conj(p)) > tol for p in phases):
            phases.append(complex(np.conj(lam) / abs(lam)))
    return phases


def _is_identity(u: ComplexMatrix, tol: float) -> bool:
    return max_abs(u - np.eye(u.shape[0])) <= tol


def solve_copier(
    copied_set: CopiedSet,
    tol: float = DEFAULT_TOL,
    attempts: int = DEFAULT_ATTEMPTS,
    seed: int = DEFAULT_SEED,
    phase_free: bool = True
) -> CopierSearchResult:
    """
    복사기 탐색

    기본형으로 줄인 집합에 대해 A (U_j ⊗ I) - (U_j ⊗ U_j) A = 0 의 공통 영공간을 구하고,
    영공간의 무작위 원소를 극분해로 유니터리에 사영해 check_copier_condition 을 통과하는
    첫 후보를 받아들인다. phase_free 이면 각 U_j 의 전역 위상을 고유값 하나가 1 이 되는
    유한개 후보 중에서 깊이 우선으로 고른다.

    Args:
        copied_set: 복사 집합
        tol: 허용오차
        attempts: 잎 노드당 무작위 시도 횟수
        seed: 시도별 시드의 기준값 (시도 t 는 default_rng([seed, t]))
        phase_free: 상태의 전역 위상을 자유 변수로 둘지 여부

    Returns:
        CopierSearchResult: 성공 시 기본형 집합에 대한 인증서 포함

    Raises:
        InvalidSetError: 기본형이 직교 조건을 만족하지 않는 경우
    """
    tol = check_tol(tol)
    if attempts < 1:
        raise ValueError(f"attempts 는 1 이상이어야 합니다: {attempts}")
    fundamental = reduce_to_fundamental(copied_set)
    if not check_orthogonality(fundamental, tol):
        raise InvalidSetError("복사 집합이 직교 조건을 만족하지 않습니다.")

    dim = copied_set.dim
    loose = max(tol, 10 * DEFAULT_TOL)
    others = [v for v in fundamental.unitaries[1:]]
    nontrivial = [v for v in others if not _is_identity(v, loose)]
    unproven = (not is_prime(dim)) and bool(nontrivial) and not any(
        has_full_spectrum(v, dim, CLUSTER_TOL) for v in nontrivial
    )
    if unproven:
        logger.warning(f"D={dim} 은 소수가 아니고 모든 원소의 스펙트럼이 축퇴되어 있어 증명되지 않은 영역입니다.")

    options = [canonical_rephasings(v) if phase_free else [1.0 + 0j] for v in others]
    stats = {"nullspace_dim": 0, "attempts": 0}
    eye_d = np.eye(dim, dtype=np.complex128)

    def draw(basis: ComplexMatrix, phases: Sequence[complex]) -> Optional[CopierCertificate]:
        phased = CopiedSet(
            dim,
            (eye_d,) + tuple(p * v for p, v in zip(phases, others)),
            phases=(0.0,) + tuple(float(np.angle(p)) for p in phases),
        )
        if not others:
            return check_copier_condition(np.eye(dim * dim), phased, tol)
        stats["nullspace_dim"] = max(stats["nullspace_dim"], basis.shape[1])
        for attempt in range(attempts):
            stats["attempts"] += 1
            rng = np.random.default_rng([seed, attempt])
            coeffs = rng.standard_normal(basis.shape[1]) + 1j * rng.standard_normal(basis.shape[1])
            candidate = (basis @ coeffs).reshape(dim * dim, dim * dim)
            sv = np.linalg.svd(candidate, compute_uv=False)
            if sv[-1] <= NULLSPACE_RCOND * sv[0]:
                logger.debug(f"시도 {attempt}: 특이 후보, 건너뜀")
                continue
            unitary, _ = polar(candidate)
            cert = check_copier_condition(unitary, phased, tol)
            if cert.valid:
                logger.debug(f"시도 {attempt} 에서 복사기 발견 (잔차 {cert.residual:.3e})")
                return cert
        return None

    def dfs(
        level: int, basis: Optional[ComplexMatrix], maps: List[ComplexMatrix], phases: List[complex]
    ) -> Optional[CopierCertificate]:
        if level == len(others):
            return draw(basis, phases)
        for phase in options[level]:
            # 부분 기저로 제한하지 않고 지금까지 고른 사상 전체를 쌓는다
            stacked = maps + [intertwiner_map(phase * others[level])]
            kernel = common_nullspace(stacked)
            if not kernel:
                continue
            found = dfs(level + 1, np.column_stack(kernel), stacked, phases + [phase])
            if found is not None:
                return found
        return None

    cert = dfs(0, None, [], [])
    if cert is not None:
        logger.info(f"복사기 발견: D={dim}, N={len(copied_set)}, 잔차 {cert.residual:.3e}")
    else:
        logger.info(f"복사기 없음: D={dim}, N={len(copied_set)}, 최대 영공간 차원 {stats['nullspace_dim']}")
    return CopierSearchResult(
        success=cert is not None,
        certificate=cert,
        nullspace_dim=stats["nullspace_dim"] if cert is None or others else dim ** 4,
        attempts_used=stats["attempts"],
        unproven_regime=unproven,
    )
