# src/obstacle_mvs/storage/file_manager.py
import os
import tempfile
from pathlib import Path
from typing import Union

from pathvalidate import sanitize_filename

from ..config.logger import logger


class OutputManager:
    """
    실행 산출물 디렉토리 구조를 관리하는 클래스.
    모든 파일은 같은 디렉토리의 임시 파일에 쓴 뒤 이름을 바꿔(os.replace) 원자적으로 교체합니다.
    """
    def __init__(self, base_dir: Union[str, Path]):
        self.base_dir = Path(base_dir)
        self.solutions_dir = self.base_dir / "solutions"
        self.sets_dir = self.base_dir / "sets"
        self.curves_dir = self.base_dir / "curves"
        self.svg_dir = self.base_dir / "svg"

        self._create_initial_structure()

    def _create_initial_structure(self):
        """
        필요한 모든 디렉토리를 생성합니다.
        """
        try:
            for directory in (self.base_dir, self.solutions_dir, self.sets_dir, self.curves_dir, self.svg_dir):
                directory.mkdir(parents=True, exist_ok=True)
            logger.debug(f"출력 디렉토리 확인/생성 완료: {self.base_dir}")
        except OSError as e:
            logger.error(f"출력 디렉토리 생성에 실패했습니다. {e}")
            raise

    @staticmethod
    def file_name(stem: str, R: float, suffix: str) -> str:
        """R 값을 담은 안전한 파일명 (예: solution_R0.5.csv)"""
        return sanitize_filename(f"{stem}_R{R:g}{suffix}", replacement_text="_")

    def manifest_path(self) -> Path:
        return self.base_dir / "manifest.json"

    def report_path(self) -> Path:
        return self.base_dir / "report.json"

    def timings_path(self) -> Path:
        return self.base_dir / "timings.json"

    def solution_path(self, R: float) -> Path:
        return self.solutions_dir / self.file_name("solution", R, ".csv")

    def indicator_path(self, R: float) -> Path:
        return self.sets_dir / self.file_name("set", R, ".csv")

    def slices_path(self, R: float) -> Path:
        return self.sets_dir / self.file_name("slices", R, ".csv")

    def curve_path(self, name: str) -> Path:
        return self.curves_dir / sanitize_filename(f"{name}.csv", replacement_text="_")

    def svg_path(self, R: float) -> Path:
        return self.svg_dir / self.file_name("set", R, ".svg")

    def write_text(self, target: Path, content: str) -> Path:
        """
        텍스트를 UTF-8 로 원자적으로 기록합니다.

        :param target: 최종 파일 경로
        :param content: 기록할 내용
        :return: 기록된 파일 경로
        """
        target = Path(target)
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
        try:
            with os.fdopen(fd, 'w', encoding='utf-8', newline='\n') as f:
                f.write(content)
            os.replace(tmp_name, target)
        except OSError as e:
            logger.error(f"파일 저장에 실패했습니다 {target}: {e}")
            if os.path.exists(tmp_name):
                os.remove(tmp_name)
            raise
        logger.debug(f"파일 저장 완료: {target}")
        return target
