"""
자유 경계 근방의 이차 성장 (상한: 최적 정칙성, 하한: 비퇴화)

자유 경계 노드 p 마다 S(r) = sup_{B_r(p)} v 를 이진 반지름열에서 구하고 log S 를 log r 에 대해 직선 맞춤합니다.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import ndimage

from ..discretization.grid import Grid
from ..obstacle.problem import ObstacleSolution
from ..errors import PreconditionError
from ..config.logger import logger

SLOPE_RANGE = (1.6, 2.4)
RATIO_LIMIT = 10.0
MIN_RADII = 4
START_CELLS = 4
DEFAULT_POINTS = 8


@dataclass
class GrowthReport:
    fb_points: List[Tuple[int, ...]]
    radii: List[List[float]]
    sup_values: List[List[float]]
    slopes: List[float]
    constants: List[float]
    ratios: List[float]
    available: int
    low_sample: bool = False
    skipped: List[Tuple[int, ...]] = field(default_factory=list)

    @property
    def slope_range(self) -> Tuple[float, float]:
        return (min(self.slopes), max(self.slopes)) if self.slopes else (float("nan"), float("nan"))

    @property
    def passed(self) -> bool:
        if not self.slopes:
            return False
        low, high = SLOPE_RANGE
        return all(low <= s <= high for s in self.slopes) and all(r <= RATIO_LIMIT for r in self.ratios)

    def rows(self) -> List[List[float]]:
        """(점 번호, r, S(r)) 행"""
        return [[k, r, S] for k, (rs, Ss) in enumerate(zip(self.radii, self.sup_values)) for r, S in zip(rs, Ss)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "fb_points": [list(p) for p in self.fb_points],
            "radii": self.radii,
            "sup_values": self.sup_values,
            "slopes": self.slopes,
            "constants": self.constants,
            "ratios": self.ratios,
            "available": self.available,
            "low_sample": self.low_sample,
            "skipped": [list(p) for p in self.skipped],
            "slope_range": list(self.slope_range),
            "passed": self.passed,
        }


def free_boundary_nodes(mask: np.ndarray) -> np.ndarray:
    """면 이웃 중 하나 이상이 집합 밖인 집합 노드"""
    structure = ndimage.generate_binary_structure(mask.ndim, 1)
    return mask & ~ndimage.binary_erosion(mask, structure=structure, border_value=1)


def growth_radii(grid: Grid, point: Tuple[int, ...], singular: Optional[Tuple[int, ...]] = None) -> List[float]:
    """
    4h 부터의 이진 반지름 (부족하면 비율 √2), r ≤ min(상자 경계 거리, 특이점 거리)/2
    """
    h = grid.h
    position = grid.node_position(point)
    cap = float(np.min(grid.M - np.abs(position)))
    if singular is not None:
        cap = min(cap, float(np.linalg.norm(position - grid.node_position(singular))))
    cap *= 0.5

    for ratio in (2.0, np.sqrt(2.0)):
        radii = []
        r = START_CELLS * h
        while r <= cap * (1 + 1e-12):
            radii.append(float(r))
            r *= ratio
        if len(radii) >= MIN_RADII:
            break
    return radii


def ball_sup(field_: np.ndarray, grid: Grid, point: Tuple[int, ...], r: float) -> float:
    """노드 p 를 중심으로 한 닫힌 공 B_r 위의 최댓값"""
    k = int(np.floor(r / grid.h + 1e-9))
    window = tuple(slice(max(i - k, 0), min(i + k + 1, grid.n)) for i in point)
    offsets = np.meshgrid(*[np.arange(s.start, s.stop) - i for s, i in zip(window, point)], indexing="ij")
    inside = sum(o * o for o in offsets) * grid.h ** 2 <= r * r * (1 + 1e-12)
    return float(field_[window][inside].max())


def growth_profile(field_: np.ndarray, mask: np.ndarray, grid: Grid, n_points: int = DEFAULT_POINTS,
                   rng: Optional[np.random.Generator] = None,
                   singular: Optional[Sequence[int]] = None) -> GrowthReport:
    """
    임의의 양수 필드와 양수 영역 마스크에 대한 성장 프로파일

    Args:
        field_: 비접촉 필드 (v 또는 일반 문제의 w)
        mask: 양수 영역 (비접촉 집합)
        grid: 격자
        n_points: 표본 자유 경계 노드 수
        rng: 표본 추출용 난수 생성기 (None 이면 앞에서부터 균등 간격)
        singular: 반지름 상한에 쓰는 특이점 (소스 노드)

    Raises:
        PreconditionError: 자유 경계가 비었거나 맞춤 가능한 점이 없음
    """
    if n_points < 1:
        raise PreconditionError(f"n_points 는 1 이상이어야 합니다: {n_points}")
    fb = np.argwhere(free_boundary_nodes(mask) & grid.interior_mask)
    if fb.size == 0:
        raise PreconditionError("자유 경계 노드가 없습니다")

    available = len(fb)
    low_sample = available < n_points
    if low_sample:
        chosen = fb
        logger.warning(f"자유 경계 노드 {available}개 < 요청 {n_points}개, 전부 사용합니다")
    elif rng is not None:
        chosen = fb[np.sort(rng.choice(available, size=n_points, replace=False))]
    else:
        chosen = fb[np.linspace(0, available - 1, n_points).astype(int)]

    sing = tuple(int(i) for i in singular) if singular is not None else None
    report = GrowthReport(fb_points=[], radii=[], sup_values=[], slopes=[], constants=[], ratios=[],
                          available=available, low_sample=low_sample)
    for row in chosen:
        point = tuple(int(i) for i in row)
        radii = growth_radii(grid, point, sing)
        if len(radii) < MIN_RADII:
            report.skipped.append(point)
            continue
        sups = np.array([ball_sup(field_, grid, point, r) for r in radii])
        if np.any(sups <= 0):
            report.skipped.append(point)
            continue
        slope, intercept = np.polyfit(np.log(radii), np.log(sups), 1)
        scaled = sups / np.asarray(radii) ** 2
        report.fb_points.append(point)
        report.radii.append(radii)
        report.sup_values.append(sups.tolist())
        report.slopes.append(float(slope))
        report.constants.append(float(np.exp(intercept)))
        report.ratios.append(float(scaled.max() / scaled.min()))

    if not report.fb_points:
        raise PreconditionError(f"맞춤 가능한 자유 경계 노드가 없습니다 ({MIN_RADII}개 이상의 반지름 필요)")
    low, high = report.slope_range
    logger.info(f"이차 성장: {len(report.fb_points)}점, 기울기 [{low:.3f}, {high:.3f}], 최대 비 {max(report.ratios):.2f}")
    return report


def quadratic_growth_check(sol: ObstacleSolution, n_points: int = DEFAULT_POINTS,
                           rng: Optional[np.random.Generator] = None) -> GrowthReport:
    """수렴한 장애물 해 v = G - w 의 자유 경계 성장 검사"""
    if not sol.converged:
        raise PreconditionError("수렴하지 않은 해에는 성장 검사를 할 수 없습니다")
    return growth_profile(sol.v, sol.active_set, sol.grid, n_points=n_points, rng=rng, singular=sol.problem.x0)
