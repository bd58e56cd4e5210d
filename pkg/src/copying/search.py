"""
정준 Bell 부분집합 전수 탐색 모듈
"""
import itertools
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd
from loguru import logger

from config.settings import DEFAULT_ATTEMPTS, DEFAULT_SEED, DEFAULT_TOL, MAX_SEARCH_DIM
from src.copying.classify import classify_copiable, ssd_canonical
from src.copying.copy_engine import solve_copier
from src.core.weyl_basis import BellIndex, bell_indices, bell_set
from src.utils.errors import DimensionError


class SearchResult:
    """전수 탐색 결과 클래스"""

    def __init__(self, dim: int, max_size: int):
        self.dim = dim
        self.max_size = max_size
        self.rows: List[Dict] = []  # 부분집합별 판정 결과

    @property
    def copiable_sets(self) -> List[Tuple[BellIndex, ...]]:
        return [row["indices"] for row in self.rows if row["copiable"]]

    @property
    def max_copiable_size(self) -> int:
        return max((len(s) for s in self.copiable_sets), default=0)

    @property
    def disagreements(self) -> List[Tuple[BellIndex, ...]]:
        """classify_copiable 과 solve_copier 판정이 다른 부분집합"""
        return [row["indices"] for row in self.rows if row["solved"] is not None and row["solved"] != row["copiable"]]

    def calculate_metrics(self):
        """크기별 집계"""
        frame = self.to_frame()
        if frame.empty:
            self.metrics = {"subsets": 0, "copiable": 0, "ssd": 0, "max_copiable_size": 0, "disagreements": 0}
            return
        self.metrics = {
            "subsets": len(frame),
            "copiable": int(frame["copiable"].sum()),
            "ssd": int(frame["ssd"].sum()),
            "max_copiable_size": self.max_copiable_size,
            "disagreements": len(self.disagreements),
        }

    def to_frame(self) -> pd.DataFrame:
        records = []
        for row in self.rows:
            records.append({
                "size": len(row["indices"]),
                "indices": " ".join(idx.label() for idx in row["indices"]),
                "copiable": row["copiable"],
                "solved": row["solved"],
                "ssd": row["ssd"] is not None,
                "pqr": row["ssd"],
                "exponents": row["exponents"],
            })
        return pd.DataFrame(records, columns=["size", "indices", "copiable", "solved", "ssd", "pqr", "exponents"])

    def print_summary(self):
        """탐색 결과 요약 출력"""
        if not hasattr(self, 'metrics'):
            self.calculate_metrics()

        print(f"\n=== 전수 탐색 결과 (D={self.dim}, 최대 크기 {self.max_size}) ===")
        print(f"부분집합 수: {self.metrics['subsets']}")
        print(f"복사 가능 집합 수: {self.metrics['copiable']}")
        print(f"SSD 집합 수: {self.metrics['ssd']}")
        print(f"최대 복사 가능 크기: {self.metrics['max_copiable_size']}")
        print(f"판정 불일치: {self.metrics['disagreements']}건")

        frame = self.to_frame()
        if not frame.empty:
            print("\n=== 크기별 복사 가능 집합 ===")
            print(frame.groupby("size")[["copiable", "ssd"]].sum().to_string())


def _evaluate(
    subset: Tuple[BellIndex, ...],
    dim: int,
    tol: float,
    seed: int,
    attempts: int,
    cross_check: bool
) -> Dict:
    copied_set = bell_set(subset)
    verdict = classify_copiable(copied_set, tol, seed=seed)
    solved: Optional[bool] = None
    if cross_check:
        solved = solve_copier(copied_set, tol, attempts=attempts, seed=seed).success
    witness = ssd_canonical(subset, dim, tol)
    return {
        "indices": subset,
        "copiable": verdict.copiable,
        "solved": solved,
        "ssd": witness.triple if witness is not None else None,
        "exponents": verdict.exponents,
    }


def search_copiable_sets(
    dim: int,
    max_size: int,
    tol: float = DEFAULT_TOL,
    seed: int = DEFAULT_SEED,
    attempts: int = DEFAULT_ATTEMPTS,
    cross_check: bool = True,
    workers: int = 1,
    sizes: Optional[Sequence[int]] = None
) -> SearchResult:
    """
    D^2 개 정준 Bell 상태의 부분집합을 크기 순으로 모두 판정

    Args:
        dim: 국소 차원 D (MAX_SEARCH_DIM 이하)
        max_size: 최대 부분집합 크기 (D+1 이하)
        tol: 허용오차
        seed: 모든 난수 내부 연산의 시드
        attempts: solve_copier 시도 횟수
        cross_check: solve_copier 로도 판정할지 여부
        workers: 스레드 수 (결과 순서는 사전식으로 고정)
        sizes: 지정 시 이 크기들만 탐색

    Returns:
        SearchResult

    Raises:
        DimensionError: 차원 또는 크기 범위를 벗어난 경우
    """
    if dim < 2 or dim > MAX_SEARCH_DIM:
        raise DimensionError(f"탐색 차원은 2..{MAX_SEARCH_DIM} 이어야 합니다: {dim}")
    if max_size < 1 or max_size > dim + 1:
        raise DimensionError(f"최대 크기는 1..{dim + 1} 이어야 합니다: {max_size}")

    targets = sizes if sizes is not None else range(1, max_size + 1)
    subsets = [
        subset
        for size in targets
        for subset in itertools.combinations(bell_indices(dim), size)
    ]
    logger.info(f"전수 탐색 시작: D={dim}, 부분집합 {len(subsets)}개")

    def job(subset: Tuple[BellIndex, ...]) -> Dict:
        return _evaluate(subset, dim, tol, seed, attempts, cross_check)

    result = SearchResult(dim, max_size)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            result.rows = list(executor.map(job, subsets))
    else:
        result.rows = [job(subset) for subset in subsets]

    result.calculate_metrics()
    logger.info(
        f"전수 탐색 완료: 복사 가능 {result.metrics['copiable']}개, "
        f"최대 크기 {result.metrics['max_copiable_size']}, 불일치 {result.metrics['disagreements']}건"
    )
    return result
