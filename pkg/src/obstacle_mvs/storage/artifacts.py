"""
산출물 직렬화 (CSV, JSON)

CSV 는 머리행 + 쉼표 구분 + 17자리 유효숫자, JSON 은 UTF-8 + 키 정렬입니다. 같은 입력은 바이트 단위로 같은 파일을 만듭니다.
"""

import io
import json
from pathlib import Path
from typing import Any, List, Sequence

import numpy as np

from .file_manager import OutputManager
from ..discretization.grid import Grid
from ..mvset.sets import MeanValueSet
from ..obstacle.problem import ObstacleSolution
from ..errors import ConfigError, GridMismatchError
from ..config.logger import logger, run_journal

FLOAT_FORMAT = "%.17g"


def _json_serializer(obj):
    """JSON 직렬화를 위한 커스텀 시리얼라이저"""
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"Type {type(obj)} not serializable")


def dumps(data: Any) -> str:
    return json.dumps(data, ensure_ascii=False, indent=2, sort_keys=True, default=_json_serializer) + "\n"


def csv_text(header: Sequence[str], rows: np.ndarray) -> str:
    """np.savetxt 로 CSV 문자열 생성"""
    buffer = io.StringIO()
    rows = np.asarray(rows, dtype=float).reshape(-1, len(header))
    np.savetxt(buffer, rows, fmt=FLOAT_FORMAT, delimiter=",", header=",".join(header), comments="")
    return buffer.getvalue()


def _coordinate_header(dim: int) -> List[str]:
    return [f"x{k + 1}" for k in range(dim)]


def _node_coordinates(grid: Grid, nodes: np.ndarray) -> np.ndarray:
    return grid.axis[nodes]


class ArtifactStore:
    """OutputManager 위에서 해, 집합, 곡선, 보고서를 기록하고 다시 읽습니다."""

    def __init__(self, output: OutputManager):
        self.output = output

    def write_json(self, path: Path, data: Any) -> Path:
        return self.output.write_text(path, dumps(data))

    @staticmethod
    def load_json(path: Path) -> Any:
        try:
            with open(path, 'r', encoding='utf-8') as f:
                return json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"산출물을 읽을 수 없습니다: {path}: {e}") from e

    def write_solution(self, solution: ObstacleSolution) -> Path:
        """v ≠ 0 인 노드의 좌표와 값"""
        grid = solution.grid
        nodes = np.argwhere(solution.v != 0.0)
        rows = np.column_stack([_node_coordinates(grid, nodes), solution.v[tuple(nodes.T)]])
        path = self.output.write_text(self.output.solution_path(solution.R),
                                      csv_text(_coordinate_header(grid.dim) + ["v"], rows))
        run_journal.log_export("solution", str(path))
        return path

    def write_indicator(self, mvs: MeanValueSet) -> Path:
        """집합에 속한 노드의 좌표"""
        nodes = np.argwhere(mvs.indicator)
        path = self.output.write_text(self.output.indicator_path(mvs.R),
                                      csv_text(_coordinate_header(mvs.grid.dim),
                                               _node_coordinates(mvs.grid, nodes)))
        run_journal.log_export("indicator", str(path))
        if mvs.grid.dim == 3:
            self.write_slices(mvs)
        return path

    def write_slices(self, mvs: MeanValueSet) -> Path:
        """x3 단면마다 (x3, 노드 수, 단면 넓이, 최대 단면 반지름)"""
        grid = mvs.grid
        planar = np.sqrt(grid.axis[:, None] ** 2 + grid.axis[None, :] ** 2)
        rows = []
        for k, z in enumerate(grid.axis):
            layer = mvs.indicator[:, :, k]
            count = int(layer.sum())
            if count:
                rows.append([z, count, count * grid.h ** 2, float(planar[layer].max())])
        path = self.output.write_text(self.output.slices_path(mvs.R),
                                      csv_text(["x3", "nodes", "area", "max_planar_radius"], np.array(rows)))
        run_journal.log_export("slices", str(path))
        return path

    def write_curve(self, name: str, header: Sequence[str], rows: Sequence[Sequence[float]]) -> Path:
        path = self.output.write_text(self.output.curve_path(name), csv_text(header, np.array(rows, dtype=float)))
        run_journal.log_export("curve", str(path))
        return path

    def load_indicator(self, R: float, grid: Grid) -> np.ndarray:
        """
        집합 CSV 를 격자 지시 함수로 복원합니다.

        Raises:
            ConfigError: 파일 없음
            GridMismatchError: 좌표가 격자 노드가 아님
        """
        path = self.output.indicator_path(R)
        if not path.exists():
            raise ConfigError(f"집합 산출물이 없습니다: {path} (먼저 solve 를 실행하세요)")
        coords = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        indicator = np.zeros(grid.shape, dtype=bool)
        if coords.size == 0:
            return indicator
        if coords.shape[1] != grid.dim:
            raise GridMismatchError(f"집합 CSV 차원({coords.shape[1]})이 격자 차원({grid.dim})과 다릅니다")
        index = np.rint((coords + grid.M) / grid.h).astype(int)
        if index.min() < 0 or index.max() >= grid.n or np.abs(grid.axis[index] - coords).max() > 1e-9 * grid.M:
            raise GridMismatchError(f"집합 CSV 좌표가 현재 격자와 맞지 않습니다: {path}")
        indicator[tuple(index.T)] = True
        logger.debug(f"집합 로드: {path} ({int(indicator.sum())} 노드)")
        return indicator
