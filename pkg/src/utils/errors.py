"""
예외 클래스 모듈
"""


class LoccError(Exception):
    """LOCC 검증 라이브러리 예외의 기본 클래스"""
    pass


class DimensionError(LoccError):
    """행렬 / 상태 차원 불일치"""
    pass


class NotUnitaryError(LoccError):
    """유니터리 행렬이 필요한 곳에 비유니터리 입력"""
    pass


class InvalidStateError(LoccError):
    """정규화되지 않았거나 최대 얽힘이 아닌 상태"""
    pass


class InvalidSetError(LoccError):
    """비어 있거나, 중복되었거나, 직교하지 않는 복사 집합"""
    pass


class InvalidXiError(LoccError):
    """xi 텐서의 슬라이스가 유니터리가 아님"""
    pass


class HypothesisError(LoccError):
    """Xi^{cc}_{b1 b2} = delta_{b1 b2} 가정 위반"""
    pass


class ChannelError(LoccError):
    """Kraus 채널 완전성 위반 또는 잘못된 기저"""
    pass


class PovmError(LoccError):
    """음수 가중치 또는 POVM 완전성 위반"""
    pass


class ProtocolError(LoccError):
    """프로토콜 전제 조건 위반 (예: SSD 가 아닌 집합의 판별)"""
    pass


class InputError(LoccError):
    """CLI 입력 파싱 오류"""
    pass
