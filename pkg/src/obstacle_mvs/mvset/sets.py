"""
평균값 집합 D_R(x0) = {v_R > θ} 추출
"""

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy import ndimage

from ..discretization.assembly import DiscreteOperator
from ..discretization.grid import Grid
from ..obstacle.lcp import solve_lcp
from ..obstacle.problem import ObstacleSolution, make_problem
from ..errors import EmptySetError, PreconditionError
from ..config.logger import logger


def unit_ball_volume(dim: int) -> float:
    """ω_dim"""
    return math.pi ** (dim / 2) / math.gamma(dim / 2 + 1)


def inner_radius(indicator: np.ndarray, grid: Grid) -> float:
    """닫힌 공 B_ρ 의 노드가 모두 집합 안에 있는 가장 큰 노드 반지름 ρ (r_in ≤ r_out)"""
    radius = grid.radius
    outside = radius[~indicator]
    if outside.size == 0:
        return float(radius[indicator].max())
    inside = radius[indicator & (radius < outside.min())]
    return float(inside.max(initial=0.0))


def outer_radius(indicator: np.ndarray, grid: Grid) -> float:
    """집합 안 노드까지의 최대 거리"""
    return float(grid.radius[indicator].max())


@dataclass(eq=False)
class MeanValueSet:
    """평균값 집합의 격자 지시 함수와 측도, 내접/외접 반지름"""
    indicator: np.ndarray
    R: float
    op: DiscreteOperator
    threshold: float
    solver_tag: str = ""
    v: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def grid(self):
        return self.op.grid

    @property
    def x0(self):
        return self.grid.center_index

    @property
    def count(self) -> int:
        return int(self.indicator.sum())

    @property
    def measure(self) -> float:
        return self.count * self.grid.cell_measure

    @property
    def kappa(self) -> float:
        """κ_R = |D_R|·R^{-dim}"""
        return self.measure * self.R ** (-self.grid.dim)

    @cached_property
    def r_in(self) -> float:
        return inner_radius(self.indicator, self.grid)

    @cached_property
    def r_out(self) -> float:
        return outer_radius(self.indicator, self.grid)

    @cached_property
    def components(self) -> int:
        """면 인접 연결 성분 수"""
        structure = ndimage.generate_binary_structure(self.grid.dim, 1)
        _, count = ndimage.label(self.indicator, structure=structure)
        return int(count)

    @property
    def connected(self) -> bool:
        return self.components == 1

    def sandwich(self) -> Dict[str, Any]:
        """ω r_in^d (1 - 3h/r_in) ≤ |D| ≤ ω r_out^d (1 + 3h/r_out)"""
        dim, h = self.grid.dim, self.grid.h
        omega = unit_ball_volume(dim)
        low = omega * self.r_in ** dim * (1.0 - 3.0 * h / self.r_in)
        high = omega * self.r_out ** dim * (1.0 + 3.0 * h / self.r_out)
        return {"lower": low, "upper": high, "holds": bool(low <= self.measure <= high)}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "R": self.R,
            "nodes": self.count,
            "measure": self.measure,
            "kappa": self.kappa,
            "r_in": self.r_in,
            "r_out": self.r_out,
            "components": self.components,
            "connected": self.connected,
            "solver": self.solver_tag,
        }


def extract_set(solution: ObstacleSolution) -> MeanValueSet:
    """
    해에서 평균값 집합을 추출합니다.

    Raises:
        PreconditionError: 해가 수렴하지 않았거나 q = 0
        EmptySetError: 빈 집합 또는 x0 ∉ D_R
    """
    problem = solution.problem
    if not solution.converged:
        raise PreconditionError(f"수렴하지 않은 해에서는 집합을 추출할 수 없습니다 (R={solution.R:g})")
    if problem.q == 0.0:
        raise PreconditionError("q = 0 이면 장애물 접촉이 없어 평균값 집합이 정의되지 않습니다")

    indicator = solution.active_set
    if not indicator.any():
        raise EmptySetError(f"R={solution.R:g} 의 평균값 집합이 비었습니다")
    if not indicator[problem.x0]:
        raise EmptySetError(f"소스 노드가 R={solution.R:g} 의 집합에 속하지 않습니다")

    mvs = MeanValueSet(indicator=indicator, R=solution.R, op=problem.op, threshold=solution.threshold,
                       solver_tag=solution.solver_tag, v=solution.v)
    if not mvs.connected:
        logger.warning(f"R={solution.R:g} 의 평균값 집합이 {mvs.components}개 성분으로 나뉩니다")
    logger.debug(f"집합 추출: R={mvs.R:g}, |D|={mvs.measure:.6g}, r_in={mvs.r_in:.4g}, r_out={mvs.r_out:.4g}")
    return mvs


def sweep_sets(op: DiscreteOperator, radii: Sequence[float], tol: float = 1e-8,
               method: str = "active_set") -> List[MeanValueSet]:
    """반지름 목록(오름차순)마다 LCP를 풀어 집합을 추출합니다."""
    if list(radii) != sorted(radii):
        raise PreconditionError("반지름 목록은 오름차순이어야 합니다")
    return [extract_set(solve_lcp(make_problem(op, R), tol=tol, method=method)) for R in radii]
