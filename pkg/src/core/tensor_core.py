"""
복소 밀집 선형대수 기본 연산 모듈

모든 연산자(A, U_j, Kraus 원소 등)는 complex128 numpy 배열로 다룬다.
"""
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, List, Sequence, Union

import numpy as np
import numpy.typing as npt
from loguru import logger
from scipy.linalg import svd

from config.settings import DEFAULT_TOL, NULLSPACE_RCOND
from src.utils.errors import DimensionError, InvalidStateError

ComplexMatrix = npt.NDArray[np.complex128]


def check_tol(tol: float) -> float:
    """허용오차 검증 (eps >= 0)"""
    if not np.isfinite(tol) or tol < 0:
        raise ValueError(f"허용오차는 0 이상의 유한한 값이어야 합니다: {tol}")
    return float(tol)


def as_matrix(a: Union[npt.ArrayLike, ComplexMatrix]) -> ComplexMatrix:
    """
    입력을 2차원 complex128 행렬로 변환

    Raises:
        DimensionError: 2차원이 아니거나 비어 있는 경우
        ValueError: NaN / Inf 가 포함된 경우
    """
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise DimensionError(f"2차원 행렬이 필요합니다. (shape: {m.shape})")
    if not np.all(np.isfinite(m)):
        raise ValueError("행렬에 NaN 또는 Inf 가 포함되어 있습니다.")
    return m


def dagger(a: ComplexMatrix) -> ComplexMatrix:
    return a.conj().T


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """H_A ⊗ H_B 위의 정규화된 순수 상태"""

    dim_a: int
    dim_b: int
    amplitudes: npt.NDArray[np.complex128] = field(repr=False)

    def __post_init__(self):
        vec = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if self.dim_a < 1 or self.dim_b < 1:
            raise DimensionError(f"국소 차원은 양의 정수여야 합니다: ({self.dim_a}, {self.dim_b})")
        if vec.size != self.dim_a * self.dim_b:
            raise DimensionError(
                f"진폭 길이 {vec.size} 가 {self.dim_a}x{self.dim_b} 와 맞지 않습니다."
            )
        if not np.all(np.isfinite(vec)):
            raise InvalidStateError("진폭에 NaN 또는 Inf 가 포함되어 있습니다.")
        norm = np.linalg.norm(vec)
        if abs(norm - 1.0) > 1e3 * DEFAULT_TOL:
            raise InvalidStateError(f"상태가 정규화되어 있지 않습니다. (norm: {norm:.12f})")
        vec.setflags(write=False)
        object.__setattr__(self, "amplitudes", vec)

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    def coefficients(self) -> ComplexMatrix:
        """|psi> = sum_ij M_ij |i>|j> 의 계수 행렬 M (dim_a x dim_b)"""
        return self.amplitudes.reshape(self.dim_a, self.dim_b)

    def density(self) -> ComplexMatrix:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    @classmethod
    def from_coefficients(cls, m: npt.ArrayLike, normalize: bool = False) -> "BipartiteState":
        m = as_matrix(m)
        vec = m.reshape(-1)
        if normalize:
            vec = vec / np.linalg.norm(vec)
        return cls(m.shape[0], m.shape[1], vec)


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """크로네커 곱 (행/열 차원이 각각 곱해짐)"""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(mats: Iterable[ComplexMatrix]) -> ComplexMatrix:
    return reduce(kron, mats)


def partial_trace(rho: ComplexMatrix, dims: Sequence[int], keep: Iterable[int]) -> ComplexMatrix:
    """
    부분 대각합 (부분계 keep 만 남김)

    Args:
        rho: 정사각 밀도 연산자
        dims: 부분계 차원 리스트
        keep: 남길 부분계 인덱스 집합

    Returns:
        ComplexMatrix: 남긴 부분계 위의 축약 밀도 연산자

    Raises:
        DimensionError: rho 크기가 dims 의 곱과 다르거나 인덱스가 범위를 벗어난 경우
    """
    rho = as_matrix(rho)
    dims = [int(d) for d in dims]
    n = len(dims)
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise DimensionError(f"rho 크기 {rho.shape} 가 부분계 차원 {dims} 과 맞지 않습니다.")
    kept = sorted(set(keep))
    if any(i < 0 or i >= n for i in kept):
        raise DimensionError(f"부분계 인덱스 {kept} 가 범위(0..{n - 1})를 벗어났습니다.")

    tensor = rho.reshape(dims + dims)
    traced = [i for i in range(n) if i not in kept]
    # 큰 인덱스부터 지워야 남은 축 번호가 유지된다
    for count, idx in enumerate(sorted(traced, reverse=True)):
        tensor = np.trace(tensor, axis1=idx, axis2=idx + n - count)

    kept_dim = int(np.prod([dims[i] for i in kept])) if kept else 1
    return tensor.reshape(kept_dim, kept_dim)


def fidelity_pure(psi: Union[BipartiteState, npt.ArrayLike], rho: ComplexMatrix) -> float:
    """
    순수 상태 충실도 <psi|rho|psi>

    Raises:
        DimensionError: 차원 불일치
    """
    vec = psi.amplitudes if isinstance(psi, BipartiteState) else np.asarray(psi, dtype=np.complex128).reshape(-1)
    rho = as_matrix(rho)
    if rho.shape != (vec.size, vec.size):
        raise DimensionError(f"상태 차원 {vec.size} 와 rho 크기 {rho.shape} 가 맞지 않습니다.")
    return float(np.real(np.vdot(vec, rho @ vec)))


def overlap_fidelity(psi: npt.ArrayLike, phi: npt.ArrayLike) -> float:
    """두 순수 상태의 |<psi|phi>|^2 (밀도 행렬을 만들지 않음)"""
    a = np.asarray(psi, dtype=np.complex128).reshape(-1)
    b = np.asarray(phi, dtype=np.complex128).reshape(-1)
    if a.size != b.size:
        raise DimensionError(f"상태 차원 불일치: {a.size} != {b.size}")
    return float(abs(np.vdot(a, b)) ** 2)


def is_unitary(a: ComplexMatrix, tol: float = DEFAULT_TOL) -> bool:
    """a^dagger a 와 단위행렬의 최대 성분 편차가 tol 이하인지 확인"""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"정사각 행렬이 필요합니다. (shape: {a.shape})")
    deviation = np.max(np.abs(dagger(a) @ a - np.eye(a.shape[0])))
    return bool(deviation <= check_tol(tol))


def max_abs(a: npt.ArrayLike) -> float:
    arr = np.asarray(a)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def common_nullspace(
    maps: Sequence[ComplexMatrix],
    rcond: float = NULLSPACE_RCOND,
    atol: float = DEFAULT_TOL
) -> List[npt.NDArray[np.complex128]]:
    """
    여러 선형 사상의 공통 영공간의 정규직교 기저

    쌓아 올린 사상의 특이값 중 max(최대값 * rcond, atol) 이하인 것을 0 으로 본다.
    사상이 수치적으로 0 이면 (최대 특이값 <= atol) 전체 공간을 돌려준다.

    Args:
        maps: 열 개수가 같은 행렬 리스트
        rcond: 상대 절단 비율
        atol: 절대 절단값

    Returns:
        List: 영공간 기저 벡터 리스트 (자명하면 빈 리스트)

    Raises:
        DimensionError: 열 개수가 다른 경우
    """
    if not maps:
        return []
    mats = [as_matrix(m) for m in maps]
    widths = {m.shape[1] for m in mats}
    if len(widths) != 1:
        raise DimensionError(f"모든 사상의 열 개수가 같아야 합니다: {sorted(widths)}")
    stacked = np.vstack(mats)
    rows, cols = stacked.shape
    _, s, vh = svd(stacked, full_matrices=rows < cols)
    cutoff = max(rcond * s[0], atol) if s.size else atol
    rank = int(np.sum(s > cutoff))
    basis = vh[rank:].conj().T
    logger.debug(f"공통 영공간 차원: {basis.shape[1]} (사상 {len(mats)}개, 열 {cols})")
    return [basis[:, i] for i in range(basis.shape[1])]


def reduced_state(state: BipartiteState, keep: int = 0) -> ComplexMatrix:
    """이분 순수 상태의 축약 밀도 연산자 (keep=0: A, keep=1: B)"""
    m = state.coefficients()
    return m @ dagger(m) if keep == 0 else (dagger(m) @ m).T


def is_maximally_entangled(state: BipartiteState, tol: float) -> bool:
    """축약 상태가 I/D 와 tol 이내인지 확인"""
    if state.dim_a != state.dim_b:
        return False
    rho_a = reduced_state(state, keep=0)
    return max_abs(rho_a - np.eye(state.dim_a) / state.dim_a) <= tol


def coefficients_in_frame(state: BipartiteState, basis_a: ComplexMatrix, basis_b: ComplexMatrix) -> ComplexMatrix:
    """
    곱 기저 {|e_k>|f_l>} 에서의 계수 행렬 c_kl = <e_k|<f_l|psi>

    basis_a, basis_b 의 열이 각각 {|e_k>}, {|f_l>} 이다.
    """
    return dagger(as_matrix(basis_a)) @ state.coefficients() @ as_matrix(basis_b).conj()


def offdiagonal_norm(m: ComplexMatrix) -> float:
    return max_abs(m - np.diag(np.diag(m)))
