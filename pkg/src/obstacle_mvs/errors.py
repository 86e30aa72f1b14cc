"""
obstacle_mvs 예외 정의

라이브러리 코드는 예외를 던지기만 하고, 종료 코드로의 변환은 main.py에서만 합니다.
"""

from typing import List, Optional, Sequence, Tuple


class ObstacleMVSError(Exception):
    """모든 패키지 예외의 기반 클래스"""


class SizingError(ObstacleMVSError, ValueError):
    """격자 크기 조건(2M/h 짝수 정수 등) 위반"""


class EllipticityError(ObstacleMVSError, ValueError):
    """계수장의 대칭성 또는 균등 타원성 검사 실패"""


class PreconditionError(ObstacleMVSError, ValueError):
    """연산의 사전 조건 위반"""


class GridMismatchError(ObstacleMVSError, ValueError):
    """서로 다른 격자 위의 데이터를 비교하려 함"""


class UnsupportedDimensionError(ObstacleMVSError, ValueError):
    """해당 차원에서 지원하지 않는 연산"""


class EmptySetError(ObstacleMVSError, ValueError):
    """빈 평균값 집합"""


class ConfigError(ObstacleMVSError, ValueError):
    """실행 설정 오류"""


class NotSubsolutionError(ObstacleMVSError, ValueError):
    """입력 필드가 이산 부해/우해 조건을 만족하지 않음"""

    def __init__(self, message: str, worst_node: Tuple[int, ...], worst_value: float):
        super().__init__(message)
        self.worst_node = worst_node
        self.worst_value = worst_value


class SolverStagnationError(ObstacleMVSError, RuntimeError):
    """반복 해법의 잔차가 정체됨"""

    def __init__(self, message: str, residual_history: Optional[Sequence[float]] = None):
        super().__init__(message)
        self.residual_history: List[float] = list(residual_history or [])


class ContinuationError(ObstacleMVSError, RuntimeError):
    """연속법의 하중 스텝이 하한 아래로 줄어듦"""

    def __init__(self, message: str, last_t: float, step: float):
        super().__init__(message)
        self.last_t = last_t
        self.step = step
