"""
obstacle-mvs - 발산형 타원 작용소의 평균값 집합 구성과 구조 검증 도구
"""

try:
    from importlib.metadata import version, PackageNotFoundError
    __version__ = version("obstacle-mvs")
except PackageNotFoundError:
    # 패키지가 설치되지 않은 경우
    __version__ = "0.0.0"

__description__ = "장애물 문제 기반 평균값 집합 구성 및 구조 정리 수치 검증 라이브러리"

__all__ = ['__version__', '__description__']
