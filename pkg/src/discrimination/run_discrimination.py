"""
단방향 LOCC 판별 예제 스크립트
"""
import numpy as np
from loguru import logger

from src.core.weyl_basis import BellIndex
from src.discrimination.discriminate import simulate_discrimination
from src.utils.logger import setup_logger


def main():
    setup_logger(log_file=None)

    # D=5 대각선 가족 {(n, n)}
    dim = 5
    indices = [BellIndex(n, n, dim) for n in range(dim)]

    try:
        result = simulate_discrimination(indices, dim)
    except Exception as e:
        logger.error(f"판별 시뮬레이션 중 오류 발생: {str(e)}")
        return

    witness = result.witness
    print("\n=== 단방향 LOCC 판별 결과 ===")
    print(f"집합: {' '.join(i.label() for i in indices)}")
    print(f"SSD 삼중항 (p, q, r): {witness.triple}")
    print(f"Kraus 완전성 잔차: {result.channel.kraus_residual:.3e}")
    print(f"전송 충실도: {[round(t.fidelity, 12) for t in result.transfers]}")
    print(f"sigma^A - I/D 최대 편차: {max(np.max(np.abs(t.rho_a - np.eye(dim) / dim)) for t in result.transfers):.3e}")
    print(f"완전 판별: {'성공' if result.is_perfect() else '실패'}")
    print(np.round(result.success, 6))


if __name__ == "__main__":
    main()
