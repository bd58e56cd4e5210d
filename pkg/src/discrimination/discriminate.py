"""
판별 모듈

분리 가능 POVM 의 크기 상한 검사와 Kraus 원소 F_k 로 만든 단방향 LOCC 전송 / 판별 프로토콜을 담당한다.
전송 채널의 공간 순서는 A ⊗ B1 ⊗ B2 이다.
"""
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from loguru import logger

from config.settings import DEFAULT_TOL, MAX_ENT_TOL
from src.copying.classify import SsdWitness, ssd_canonical
from src.core.tensor_core import (
    BipartiteState,
    ComplexMatrix,
    as_matrix,
    check_tol,
    dagger,
    fidelity_pure,
    is_maximally_entangled,
    is_unitary,
    kron,
    kron_all,
    max_abs,
    partial_trace,
)
from src.core.weyl_basis import BellIndex, bell_state
from src.utils.errors import ChannelError, DimensionError, InvalidStateError, PovmError, ProtocolError

CONVENTIONS = ("conjugated-bra", "literal")


@dataclass(frozen=True, eq=False)
class ProductTerm:
    """p |psi><psi| ⊗ |phi><phi| (ket 은 정규화하여 저장)"""

    weight: float
    ket_a: npt.NDArray[np.complex128] = field(repr=False)
    ket_b: npt.NDArray[np.complex128] = field(repr=False)

    def __post_init__(self):
        if not np.isfinite(self.weight) or self.weight < 0:
            raise PovmError(f"POVM 가중치는 0 이상이어야 합니다: {self.weight}")
        for name in ("ket_a", "ket_b"):
            ket = np.asarray(getattr(self, name), dtype=np.complex128).reshape(-1)
            norm = np.linalg.norm(ket)
            if norm == 0:
                raise PovmError(f"{name} 가 영벡터입니다.")
            object.__setattr__(self, name, ket / norm)

    def matrix(self) -> ComplexMatrix:
        return self.weight * np.kron(np.outer(self.ket_a, self.ket_a.conj()), np.outer(self.ket_b, self.ket_b.conj()))


@dataclass(frozen=True, eq=False)
class SeparablePovm:
    """M_i = sum_k p_ik |psi_k><psi_k| ⊗ |phi_k><phi_k| 의 리스트"""

    dim_a: int
    dim_b: int
    elements: Tuple[Tuple[ProductTerm, ...], ...]

    def __post_init__(self):
        if not self.elements:
            raise PovmError("POVM 원소가 없습니다.")
        for i, element in enumerate(self.elements):
            for term in element:
                if term.ket_a.size != self.dim_a or term.ket_b.size != self.dim_b:
                    raise DimensionError(f"M_{i} 의 곱 항 차원이 ({self.dim_a},{self.dim_b}) 과 다릅니다.")

    def matrices(self) -> List[ComplexMatrix]:
        n = self.dim_a * self.dim_b
        return [sum((t.matrix() for t in element), np.zeros((n, n), dtype=np.complex128)) for element in self.elements]

    def completeness_residual(self) -> float:
        return max_abs(sum(self.matrices()) - np.eye(self.dim_a * self.dim_b))

    @classmethod
    def identity(cls, dim: int) -> "SeparablePovm":
        """단일 원소 {I ⊗ I}"""
        eye = np.eye(dim)
        terms = tuple(ProductTerm(1.0, eye[a], eye[b]) for a in range(dim) for b in range(dim))
        return cls(dim, dim, (terms,))

    @classmethod
    def computational(cls, dim: int) -> "SeparablePovm":
        """계산 기저 곱 측정 {|a><a| ⊗ |b><b|}"""
        eye = np.eye(dim)
        return cls(dim, dim, tuple((ProductTerm(1.0, eye[a], eye[b]),) for a in range(dim) for b in range(dim)))


@dataclass(frozen=True, eq=False)
class PovmBoundReport:
    """
    probabilities[i, j] = <Psi_j|M_i|Psi_j>, bounds[i] = Tr(M_i)/D, slack = bounds - probabilities
    """

    probabilities: npt.NDArray[np.float64] = field(repr=False)
    bounds: npt.NDArray[np.float64] = field(repr=False)
    slack: npt.NDArray[np.float64] = field(repr=False)
    min_slack: float
    violations: int
    perfect: bool
    size_bound_holds: bool


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Kraus 원소 리스트와 완전성 메타데이터"""

    elements: Tuple[ComplexMatrix, ...] = field(repr=False)
    in_dims: Tuple[int, ...]
    out_dims: Tuple[int, ...]
    convention: str = "conjugated-bra"
    resolution_residual: float = 0.0

    @property
    def kraus_residual(self) -> float:
        """max |sum_k F_k^dagger F_k - I|"""
        total = sum(dagger(f) @ f for f in self.elements)
        return max_abs(total - np.eye(int(np.prod(self.in_dims))))

    def flagged(self, tol: float = DEFAULT_TOL) -> bool:
        """sum_k P_k != I 인 규약인지"""
        return self.resolution_residual > tol


@dataclass(frozen=True, eq=False)
class TransferResult:
    rho_a: ComplexMatrix = field(repr=False)
    rho_b1b2: ComplexMatrix = field(repr=False)
    fidelity: float


@dataclass(frozen=True, eq=False)
class DiscriminationResult:
    """success[alpha, beta] = alpha 상태에서 beta 라고 판정할 확률"""

    success: npt.NDArray[np.float64] = field(repr=False)
    witness: SsdWitness = field(repr=False)
    channel: KrausChannel = field(repr=False)
    transfers: Tuple[TransferResult, ...] = field(repr=False)

    def is_perfect(self, tol: float = DEFAULT_TOL) -> bool:
        return max_abs(self.success - np.eye(len(self.success))) <= tol


def povm_bound_check(
    povm: SeparablePovm,
    states: Sequence[BipartiteState],
    tol: float = DEFAULT_TOL
) -> PovmBoundReport:
    """
    <Psi_j|M_i|Psi_j> <= Tr(M_i)/D 검사와 완전 판별이면 N <= D 인지 확인

    Args:
        povm: 분리 가능 POVM
        states: 최대 얽힘 상태 리스트
        tol: 허용오차 (부등식 위반은 slack < -tol)

    Raises:
        PovmError: POVM 완전성 위반
        InvalidStateError: 최대 얽힘이 아닌 상태
        DimensionError: 차원 불일치
    """
    tol = check_tol(tol)
    if not states:
        raise InvalidStateError("상태 리스트가 비어 있습니다.")
    residual = povm.completeness_residual()
    if residual > max(tol, 10 * DEFAULT_TOL):
        raise PovmError(f"POVM 완전성 위반: sum M_i - I 잔차 {residual:.3e}")
    for j, state in enumerate(states):
        if (state.dim_a, state.dim_b) != (povm.dim_a, povm.dim_b):
            raise DimensionError(f"상태 {j} 의 차원이 POVM 과 다릅니다.")
        if not is_maximally_entangled(state, MAX_ENT_TOL):
            raise InvalidStateError(f"상태 {j} 가 최대 얽힘 상태가 아닙니다.")

    dim = povm.dim_a
    mats = povm.matrices()
    probabilities = np.array([[fidelity_pure(state, m) for state in states] for m in mats])
    bounds = np.array([np.real(np.trace(m)) / dim for m in mats])
    slack = bounds[:, None] - probabilities
    violations = int(np.sum(slack < -tol))

    n = len(states)
    perfect = len(mats) >= n and all(probabilities[j, j] >= 1 - tol for j in range(n))
    size_bound_holds = not perfect or n <= dim
    if violations:
        logger.error(f"상한 부등식 위반 {violations}건 (최소 slack {slack.min():.3e})")
    return PovmBoundReport(
        probabilities=probabilities,
        bounds=bounds,
        slack=slack,
        min_slack=float(slack.min()),
        violations=violations,
        perfect=perfect,
        size_bound_holds=size_bound_holds,
    )


def _local_rank_one_povm(dim: int, count: int, rng: np.random.Generator) -> List[npt.NDArray[np.complex128]]:
    # S^{-1/2} v_k 로 정규화하면 sum_k |w_k><w_k| = I
    vecs = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    s = sum(np.outer(v, v.conj()) for v in vecs)
    evals, evecs = np.linalg.eigh(s)
    inv_sqrt = evecs @ np.diag(evals ** -0.5) @ dagger(evecs)
    return [inv_sqrt @ v for v in vecs]


def random_separable_povm(
    dim: int,
    terms: int,
    outcomes: int,
    rng: np.random.Generator
) -> SeparablePovm:
    """
    국소 랭크 1 POVM 두 개의 곱 항 (최대 terms 개) 을 outcomes 개 결과로 무작위 분배한 완전한 분리 가능 POVM

    Raises:
        PovmError: terms < D^2 또는 outcomes < 1
    """
    if terms < dim * dim or outcomes < 1:
        raise PovmError(f"terms >= D^2={dim * dim}, outcomes >= 1 이어야 합니다: ({terms}, {outcomes})")
    k_a = int(rng.integers(dim, terms // dim + 1))
    k_b = int(rng.integers(dim, terms // k_a + 1))
    side_a = _local_rank_one_povm(dim, k_a, rng)
    side_b = _local_rank_one_povm(dim, k_b, rng)

    buckets: List[List[ProductTerm]] = [[] for _ in range(outcomes)]
    for w_a in side_a:
        for w_b in side_b:
            weight = float(np.vdot(w_a, w_a).real * np.vdot(w_b, w_b).real)
            buckets[int(rng.integers(outcomes))].append(ProductTerm(weight, w_a, w_b))
    elements = tuple(tuple(b) for b in buckets if b)
    return SeparablePovm(dim, dim, elements)


def _fourier_vectors(basis: ComplexMatrix, dim: int) -> List[npt.NDArray[np.complex128]]:
    # phi_k = sum_i omega^{ki} e_i / sqrt(D)
    i = np.arange(dim)
    return [basis @ np.exp(2j * np.pi * k * i / dim) / np.sqrt(dim) for k in range(dim)]


def transfer_cnot(basis_e: ComplexMatrix, basis_f: ComplexMatrix) -> ComplexMatrix:
    """B1 ⊗ B2 위의 sum_{kl} |e_k>|f_{k+l}> <f_k|<l|"""
    dim = basis_e.shape[0]
    eye = np.eye(dim)
    cnot = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
    for k in range(dim):
        for l in range(dim):
            out = np.kron(basis_e[:, k], basis_f[:, (k + l) % dim])
            inp = np.kron(basis_f[:, k], eye[l])
            cnot += np.outer(out, inp.conj())
    return cnot


def build_transfer_channel(
    dim: int,
    basis_e: ComplexMatrix,
    basis_f: ComplexMatrix,
    convention: str = "conjugated-bra",
    tol: float = DEFAULT_TOL
) -> KrausChannel:
    """
    F_k = (I_A ⊗ CNOT)(I_A ⊗ U_k ⊗ I_B2)(P_k ⊗ I_B1B2) 채널 생성

    conjugated-bra 규약은 P_k = |phi_k><phi_k| 로 sum_k P_k = I 이다.
    literal 규약은 bra 계수도 omega^{kl} 이어서 P_k = |phi_k><phi_{-k}| 이고 D >= 3 에서 sum_k P_k != I 이다.

    Args:
        dim: 국소 차원 D
        basis_e: 열이 {|e_i>} 인 유니터리
        basis_f: 열이 {|f_i>} 인 유니터리
        convention: "conjugated-bra" 또는 "literal"
        tol: 허용오차

    Returns:
        KrausChannel: D 개의 Kraus 원소

    Raises:
        ChannelError: 기저가 유니터리가 아니거나 sum F_k^dagger F_k != I
    """
    tol = check_tol(tol)
    if convention not in CONVENTIONS:
        raise ChannelError(f"알 수 없는 규약입니다: {convention}")
    basis_e = as_matrix(basis_e)
    basis_f = as_matrix(basis_f)
    if basis_e.shape != (dim, dim) or basis_f.shape != (dim, dim):
        raise DimensionError(f"기저 크기가 D={dim} 과 맞지 않습니다: {basis_e.shape}, {basis_f.shape}")
    loose = max(tol, 10 * DEFAULT_TOL)
    if not (is_unitary(basis_e, loose) and is_unitary(basis_f, loose)):
        raise ChannelError("전송 채널 기저가 유니터리가 아닙니다.")

    phis = _fourier_vectors(basis_e, dim)
    if convention == "conjugated-bra":
        projectors = [np.outer(phis[k], phis[k].conj()) for k in range(dim)]
    else:
        projectors = [np.outer(phis[k], phis[-k % dim].conj()) for k in range(dim)]
    resolution_residual = max_abs(sum(projectors) - np.eye(dim))

    eye = np.eye(dim)
    cnot = transfer_cnot(basis_e, basis_f)
    elements = []
    for k in range(dim):
        u_k = basis_f @ np.diag(np.exp(2j * np.pi * k * np.arange(dim) / dim)) @ dagger(basis_f)
        elements.append(
            kron(eye, cnot) @ kron_all([eye, u_k, eye]) @ kron_all([projectors[k], eye, eye])
        )

    channel = KrausChannel(tuple(elements), (dim, dim, dim), (dim, dim, dim), convention, resolution_residual)
    if channel.kraus_residual > loose:
        raise ChannelError(f"Kraus 완전성 위반 ({convention}): 잔차 {channel.kraus_residual:.3e}")
    if channel.flagged(loose):
        logger.warning(f"{convention} 규약: sum P_k - I 잔차 {resolution_residual:.3e}")
    logger.debug(f"전송 채널 생성: D={dim}, {convention}, Kraus 잔차 {channel.kraus_residual:.3e}")
    return channel


def apply_channel(channel: KrausChannel, rho: ComplexMatrix) -> ComplexMatrix:
    """rho -> sum_k F_k rho F_k^dagger"""
    rho = as_matrix(rho)
    n = int(np.prod(channel.in_dims))
    if rho.shape != (n, n):
        raise DimensionError(f"rho 크기 {rho.shape} 가 채널 입력 차원 {n} 과 맞지 않습니다.")
    return sum(f @ rho @ dagger(f) for f in channel.elements)


def operator_schmidt_rank(
    op: ComplexMatrix,
    dims_left: Sequence[int],
    dims_right: Sequence[int],
    tol: float = DEFAULT_TOL
) -> int:
    """왼쪽 | 오른쪽 분할에 대한 연산자 슈미트 랭크"""
    op = as_matrix(op)
    dl = int(np.prod(dims_left))
    dr = int(np.prod(dims_right))
    if op.shape != (dl * dr, dl * dr):
        raise DimensionError(f"연산자 크기 {op.shape} 가 {dl}x{dr} 분할과 맞지 않습니다.")
    realigned = op.reshape(dl, dr, dl, dr).transpose(0, 2, 1, 3).reshape(dl * dl, dr * dr)
    sv = np.linalg.svd(realigned, compute_uv=False)
    return int(np.sum(sv > max(tol, 1e-12) * max(sv[0], 1.0)))


def simulate_transfer(channel: KrausChannel, psi: BipartiteState) -> TransferResult:
    """
    |psi>^{AB1} ⊗ |0>^{B2} 에 채널을 적용하고 B1B2 축약 상태의 충실도를 계산

    목표 상태는 psi 와 같은 계수 벡터를 B1 ⊗ B2 위에 둔 것이다.

    Raises:
        DimensionError: psi 의 차원이 채널과 맞지 않는 경우
    """
    dim_a, dim_b1, dim_b2 = channel.in_dims
    if (psi.dim_a, psi.dim_b) != (dim_a, dim_b1):
        raise DimensionError(f"상태 차원 ({psi.dim_a},{psi.dim_b}) 이 채널 ({dim_a},{dim_b1}) 과 맞지 않습니다.")
    ancilla = np.zeros(dim_b2, dtype=np.complex128)
    ancilla[0] = 1.0
    vec = np.kron(psi.amplitudes, ancilla)
    rho_out = apply_channel(channel, np.outer(vec, vec.conj()))
    rho_a = partial_trace(rho_out, channel.out_dims, keep={0})
    rho_b1b2 = partial_trace(rho_out, channel.out_dims, keep={1, 2})
    fidelity = fidelity_pure(psi.amplitudes, rho_b1b2)
    return TransferResult(rho_a, rho_b1b2, fidelity)


def simulate_discrimination(
    indices: Sequence[BellIndex],
    dim: int,
    tol: float = DEFAULT_TOL,
    convention: str = "conjugated-bra"
) -> DiscriminationResult:
    """
    SSD 정준 Bell 집합의 단방향 LOCC 판별 시뮬레이션

    증거의 슈미트 기저로 전송 채널을 만들고 각 상태를 B1B2 로 옮긴 뒤,
    {Psi_alpha^{B1B2}} 를 확장한 정규직교 기저로 측정한다.

    Returns:
        DiscriminationResult: success 가 단위행렬이면 완전 판별

    Raises:
        ProtocolError: SSD 가 아닌 집합
    """
    witness = ssd_canonical(indices, dim, tol)
    if witness is None:
        raise ProtocolError(f"SSD 집합이 아닙니다: {[i.label() for i in indices]}")
    channel = build_transfer_channel(dim, witness.basis_a, witness.basis_b, convention, tol)

    states = [bell_state(idx) for idx in indices]
    transfers = tuple(simulate_transfer(channel, state) for state in states)

    columns = np.column_stack([s.amplitudes for s in states])
    q, _ = np.linalg.qr(np.hstack([columns, np.eye(dim * dim)]))
    n = len(states)
    success = np.array([
        [float(np.real(np.vdot(q[:, beta], t.rho_b1b2 @ q[:, beta]))) for beta in range(n)]
        for t in transfers
    ])
    logger.info(f"판별 시뮬레이션 D={dim}, N={n}: 최대 오차 {max_abs(success - np.eye(n)):.3e}")
    return DiscriminationResult(success, witness, channel, transfers)
