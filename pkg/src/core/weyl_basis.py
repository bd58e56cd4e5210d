"""
Weyl-Heisenberg 연산자와 표준 Bell 상태 모듈

관례:
    omega = exp(+2 pi i / D)
    Z = diag(1, omega, ..., omega^{D-1})
    X = sum_k |k><k+1 mod D|  (X|j> = |j-1 mod D>, 따라서 X Z = omega Z X)
    |Psi_00> = (1/sqrt(D)) sum_k |k>|k>
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence

import numpy as np
from loguru import logger

from src.core.tensor_core import BipartiteState, ComplexMatrix
from src.utils.errors import DimensionError, InvalidSetError


def _check_dim(dim: int) -> int:
    if int(dim) != dim or dim < 2:
        raise DimensionError(f"국소 차원 D 는 2 이상의 정수여야 합니다: {dim}")
    return int(dim)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, int(n ** 0.5) + 1))


@dataclass(frozen=True)
class PhaseRoot:
    """D 차 단위근 omega = exp(2 pi i / D)"""

    dim: int

    @property
    def value(self) -> complex:
        return complex(np.exp(2j * np.pi / self.dim))

    def power(self, k: int) -> complex:
        return complex(np.exp(2j * np.pi * (k % self.dim) / self.dim))


@dataclass(frozen=True, order=True)
class BellIndex:
    """표준 Bell 상태 Psi_nm 의 인덱스 (n: Z 지수, m: X 지수)"""

    n: int
    m: int
    dim: int

    def __post_init__(self):
        _check_dim(self.dim)
        if not (0 <= self.n < self.dim and 0 <= self.m < self.dim):
            raise DimensionError(f"Bell 인덱스 ({self.n},{self.m}) 가 0..{self.dim - 1} 범위를 벗어났습니다.")

    @classmethod
    def parse(cls, text: str, dim: int) -> "BellIndex":
        """'n,m' 형식의 문자열을 파싱 (값은 mod D 로 줄이지 않음)"""
        try:
            n_str, m_str = text.split(",")
            return cls(int(n_str), int(m_str), dim)
        except ValueError as e:
            raise DimensionError(f"Bell 인덱스 형식은 'n,m' 이어야 합니다: {text!r} ({e})")

    def label(self) -> str:
        return f"{self.n},{self.m}"


@lru_cache(maxsize=None)
def _pauli_z(dim: int) -> ComplexMatrix:
    z = np.diag(np.exp(2j * np.pi * np.arange(dim) / dim))
    z.setflags(write=False)
    return z


@lru_cache(maxsize=None)
def _pauli_x(dim: int) -> ComplexMatrix:
    x = np.zeros((dim, dim), dtype=np.complex128)
    for k in range(dim):
        x[k, (k + 1) % dim] = 1.0
    x.setflags(write=False)
    return x


def pauli_z(dim: int) -> ComplexMatrix:
    """일반화된 Pauli Z (clock) 연산자"""
    return _pauli_z(_check_dim(dim)).copy()


def pauli_x(dim: int) -> ComplexMatrix:
    """일반화된 Pauli X (shift) 연산자 sum_k |k><k+1|"""
    return _pauli_x(_check_dim(dim)).copy()


def weyl_operator(n: int, m: int, dim: int) -> ComplexMatrix:
    """Z^n X^m"""
    dim = _check_dim(dim)
    return np.linalg.matrix_power(_pauli_z(dim), n % dim) @ np.linalg.matrix_power(_pauli_x(dim), m % dim)


def psi00(dim: int) -> BipartiteState:
    dim = _check_dim(dim)
    return BipartiteState.from_coefficients(np.eye(dim) / np.sqrt(dim))


def state_from_unitary(u: ComplexMatrix, dim: int) -> BipartiteState:
    """(U ⊗ I)|Psi_00> 의 계수 행렬은 U / sqrt(D)"""
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (dim, dim):
        raise DimensionError(f"{dim}x{dim} 유니터리가 필요합니다. (shape: {u.shape})")
    return BipartiteState.from_coefficients(u / np.sqrt(dim))


def bell_state(idx: BellIndex) -> BipartiteState:
    """|Psi_nm> = (Z^n X^m ⊗ I)|Psi_00>"""
    return state_from_unitary(weyl_operator(idx.n, idx.m, idx.dim), idx.dim)


def bell_indices(dim: int) -> List[BellIndex]:
    """D^2 개의 모든 Bell 인덱스 (사전식 순서)"""
    dim = _check_dim(dim)
    return [BellIndex(n, m, dim) for n in range(dim) for m in range(dim)]


def fourier_matrix(dim: int) -> ComplexMatrix:
    """F_{jk} = omega^{jk} / sqrt(D) (D=2 에서 Hadamard)"""
    dim = _check_dim(dim)
    j, k = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
    return np.exp(2j * np.pi * j * k / dim) / np.sqrt(dim)


def theorem3_set(dim: int, js: Sequence[int]):
    """
    Z 거듭제곱 복사 집합 {Z^j}

    Args:
        dim: 국소 차원 D
        js: 서로 다른 지수 리스트 (mod D)

    Returns:
        CopiedSet: U_j = Z^j

    Raises:
        InvalidSetError: 지수가 중복된 경우
    """
    from src.copying.copy_engine import CopiedSet

    dim = _check_dim(dim)
    reduced = [j % dim for j in js]
    if len(set(reduced)) != len(reduced):
        raise InvalidSetError(f"지수가 중복되었습니다: {list(js)}")
    z = _pauli_z(dim)
    return CopiedSet(dim, tuple(np.linalg.matrix_power(z, j) for j in reduced))


def bell_set(indices: Sequence[BellIndex]):
    """Bell 인덱스 리스트 -> CopiedSet {Z^n X^m}"""
    from src.copying.copy_engine import CopiedSet

    if not indices:
        raise InvalidSetError("빈 Bell 인덱스 리스트입니다.")
    dims = {idx.dim for idx in indices}
    if len(dims) != 1:
        raise DimensionError(f"Bell 인덱스의 차원이 서로 다릅니다: {sorted(dims)}")
    if len(set(indices)) != len(indices):
        raise InvalidSetError(f"Bell 인덱스가 중복되었습니다: {[i.label() for i in indices]}")
    dim = dims.pop()
    logger.debug(f"Bell 집합 생성: D={dim}, {[i.label() for i in indices]}")
    return CopiedSet(dim, tuple(weyl_operator(i.n, i.m, dim) for i in indices))


def mod_inverse(a: int, dim: int) -> int:
    return pow(a % dim, -1, dim)


def root_exponents(values, dim: int, tol: float):
    """
    복소수 값들을 omega^e 로 표현했을 때의 지수 e (mod D)

    Returns:
        np.ndarray 또는 None: 어느 값이라도 D 차 단위근에서 tol 보다 멀면 None
    """
    vals = np.asarray(values, dtype=np.complex128).reshape(-1)
    exps = np.mod(np.rint(np.angle(vals) * dim / (2 * np.pi)).astype(int), dim)
    roots = np.exp(2j * np.pi * exps / dim)
    if np.any(np.abs(vals - roots) > tol):
        return None
    return exps


def rephased_exponents(u: ComplexMatrix, dim: int, tol: float):
    """첫 고유값을 1 로 맞춘 뒤 고유값들의 단위근 지수 (단위근이 아니면 None)"""
    eigs = np.linalg.eigvals(np.asarray(u, dtype=np.complex128))
    ref = eigs[0] / abs(eigs[0])
    return root_exponents(eigs / ref, dim, tol)


def has_full_spectrum(u: ComplexMatrix, dim: int, tol: float) -> bool:
    """전역 위상을 제거한 스펙트럼이 D 개의 서로 다른 D 차 단위근인지"""
    exps = rephased_exponents(u, dim, tol)
    return exps is not None and len(set(exps.tolist())) == dim
