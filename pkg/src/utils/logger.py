"""
로깅 설정 모듈
"""
import os
import sys
from datetime import datetime
from typing import Optional

from loguru import logger

from config.settings import LOG_DIR, LOG_FILE, LOG_LEVEL


def setup_logger(level: str = LOG_LEVEL, log_file: Optional[str] = LOG_FILE) -> None:
    """
    터미널 / 파일 로그 싱크 설정

    Args:
        level: 터미널 출력 로그 레벨
        log_file: 파일 이름 (None 이면 파일 로그를 남기지 않음)
    """
    # 기존 로거 제거
    logger.remove()

    # 터미널 출력 설정 (간단한 포맷)
    logger.add(
        sys.stderr,
        format="<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | <level>{message}</level>",
        level=level,
        colorize=True
    )

    if not log_file:
        return

    os.makedirs(LOG_DIR, exist_ok=True)
    stem, ext = os.path.splitext(log_file)
    path = os.path.join(LOG_DIR, f"{stem}_{datetime.now().strftime('%Y%m%d')}{ext or '.log'}")

    # 파일 출력 설정 (상세 포맷)
    logger.add(
        path,
        format="{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {name}:{function}:{line} | {message}",
        level="DEBUG",
        rotation="00:00",  # 매일 자정에 새 파일 생성
        retention="30 days",  # 30일간 보관
        encoding="utf-8"
    )
