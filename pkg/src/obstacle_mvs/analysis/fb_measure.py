"""
자유 경계 띠 측도의 감소

한 셀 두께 경계 띠의 측도 β(h) = (#띠 노드)·h^dim 은 자유 경계가 측도 0 이면 h → 0 에서 0 으로 갑니다.
log β 대 log h 기울기로 띠의 차원 d = dim - 기울기 를 추정합니다.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Sequence

import numpy as np

from .growth import free_boundary_nodes
from ..obstacle.lcp import solve_lcp
from ..obstacle.problem import ObstacleProblem, rebuild
from ..errors import PreconditionError
from ..config.logger import logger

MIN_LEVELS = 3
CODIMENSION_MIN = 0.5


@dataclass
class FBMeasureReport:
    dim: int
    h_list: List[float]
    band_nodes: List[int]
    band_measure: List[float]
    slope: float

    @property
    def dimension(self) -> float:
        return self.dim - self.slope

    @property
    def decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.band_measure, self.band_measure[1:]))

    @property
    def passed(self) -> bool:
        return self.decreasing and self.dimension <= self.dim - CODIMENSION_MIN

    def to_dict(self) -> Dict[str, Any]:
        return {
            "h": self.h_list,
            "band_nodes": self.band_nodes,
            "band_measure": self.band_measure,
            "slope": self.slope,
            "dimension": self.dimension,
            "decreasing": self.decreasing,
            "passed": self.passed,
        }


def fb_measure_decay(problem: ObstacleProblem, h_list: Sequence[float], tol: float = 1e-8,
                     method: str = "active_set") -> FBMeasureReport:
    """
    같은 물리 문제를 여러 h 에서 풀어 띠 측도의 감소를 확인합니다.

    Raises:
        PreconditionError: 해상도 3개 미만 또는 h 가 감소하지 않음
    """
    h_list = [float(h) for h in h_list]
    if len(h_list) < MIN_LEVELS:
        raise PreconditionError(f"해상도가 {MIN_LEVELS}개 이상 필요합니다: {h_list}")
    if any(b >= a for a, b in zip(h_list, h_list[1:])):
        raise PreconditionError(f"h 목록은 감소해야 합니다: {h_list}")

    dim = problem.grid.dim
    counts, measures = [], []
    for h in h_list:
        sol = solve_lcp(rebuild(problem, h=h), tol=tol, method=method)
        band = free_boundary_nodes(sol.active_set) & sol.grid.interior_mask
        counts.append(int(band.sum()))
        measures.append(counts[-1] * h ** dim)
        logger.debug(f"띠 측도: h={h:g}, 노드 {counts[-1]}, β={measures[-1]:.4e}")

    if min(measures) <= 0:
        slope = float("nan")
    else:
        slope = float(np.polyfit(np.log(h_list), np.log(measures), 1)[0])
    report = FBMeasureReport(dim=dim, h_list=h_list, band_nodes=counts, band_measure=measures, slope=slope)
    if not report.decreasing:
        logger.warning(f"띠 측도가 단조 감소하지 않습니다: {measures}")
    logger.info(f"자유 경계 띠: 기울기 {slope:.3f}, 추정 차원 {report.dimension:.3f}")
    return report
