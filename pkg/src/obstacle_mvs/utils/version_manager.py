"""
버전 정보와 설정 스키마 호환성 관리 모듈
"""
import platform
from importlib.metadata import PackageNotFoundError, version
from typing import Any, Dict, Tuple

from packaging import version as pkg_version

from ..errors import ConfigError

SCHEMA_VERSION = "1.0"

# 매니페스트에 버전을 남길 수치 계산 의존성
NUMERIC_PACKAGES: Tuple[str, ...] = ("numpy", "scipy", "pyamg", "numba")


def _installed(dist: str) -> str:
    try:
        return version(dist)
    except PackageNotFoundError:
        return "not installed"


class VersionManager:
    """패키지, 의존성, 설정 스키마 버전"""

    def __init__(self, dist: str = "obstacle-mvs"):
        self.package_version = _installed(dist)
        if self.package_version == "not installed":
            # 설치되지 않은 소스 트리
            self.package_version = "0.0.0"

    def get_version_info(self) -> Dict[str, Any]:
        """
        매니페스트용 실행 환경 정보

        시각 정보는 넣지 않습니다. 같은 환경에서는 항상 같은 값을 돌려줍니다.
        """
        info: Dict[str, Any] = {
            "version": self.package_version,
            "schema_version": SCHEMA_VERSION,
            "python_version": platform.python_version(),
            "platform": f"{platform.system()}-{platform.machine()}",
        }
        info.update({name: _installed(name) for name in NUMERIC_PACKAGES})
        return info

    @staticmethod
    def compare_versions(left: str, right: str) -> int:
        """-1, 0, 1 (left <, ==, > right)"""
        a, b = pkg_version.parse(left), pkg_version.parse(right)
        return (a > b) - (a < b)

    @staticmethod
    def check_schema(schema_version: str) -> None:
        """
        설정 파일 스키마의 주 버전이 현재와 같은지 확인합니다.

        Raises:
            ConfigError: 파싱 실패 또는 주 버전 불일치
        """
        try:
            requested = pkg_version.parse(str(schema_version))
        except pkg_version.InvalidVersion as e:
            raise ConfigError(f"스키마 버전을 해석할 수 없습니다: {schema_version}") from e
        if requested.major != pkg_version.parse(SCHEMA_VERSION).major:
            raise ConfigError(f"지원하지 않는 스키마 버전입니다: {schema_version} (현재 {SCHEMA_VERSION})")
