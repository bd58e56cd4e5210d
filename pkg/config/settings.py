"""
설정 파일
"""
import os
from pathlib import Path
from dotenv import load_dotenv

# .env 파일 로드
env_path = Path(__file__).parent.parent / '.env'
load_dotenv(env_path)

# 수치 허용오차 설정
DEFAULT_TOL = float(os.getenv('LOCC_TOL', '1e-9'))  # 성분별 절대 허용오차
NULLSPACE_RCOND = float(os.getenv('LOCC_NULLSPACE_RCOND', '1e-8'))  # 최대 특이값 대비 절단 비율
CLUSTER_TOL = float(os.getenv('LOCC_CLUSTER_TOL', '1e-6'))  # 고유값 군집 / 단위근 판정
MAX_ENT_TOL = float(os.getenv('LOCC_MAX_ENT_TOL', '1e-8'))  # 축약 상태와 I/D 의 허용 편차

# 난수 / 탐색 설정
DEFAULT_SEED = int(os.getenv('LOCC_SEED', '0'))
DEFAULT_ATTEMPTS = int(os.getenv('LOCC_ATTEMPTS', '64'))  # solve_copier 무작위 시도 횟수
MAX_SEARCH_DIM = int(os.getenv('LOCC_MAX_SEARCH_DIM', '3'))  # 전수 탐색 허용 최대 차원

# 로깅 설정
LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
LOG_FILE = os.getenv('LOG_FILE', 'locc_verify.log')
LOG_DIR = os.getenv('LOG_DIR', str(Path(__file__).parent.parent / 'logs'))
