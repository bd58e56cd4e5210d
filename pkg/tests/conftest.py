import numpy as np
import pytest
from loguru import logger


@pytest.fixture(autouse=True)
def quiet_logger():
    """테스트 중 터미널 로그 억제"""
    logger.remove()
    yield


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def tol():
    return 1e-9
