"""
이산화 수렴 연구: 해상도 간 차이와 풀이 경로 간 차이
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

import numpy as np

from ..obstacle.lcp import solve_lcp
from ..obstacle.penalty import PenaltyProfile
from ..obstacle.problem import ObstacleProblem, rebuild
from ..obstacle.semilinear import solve_penalized_semilinear
from ..obstacle.variational import solve_variational_penalty
from ..errors import PreconditionError
from ..config.logger import logger

# 소스 노드의 로그 특이성 때문에 |x| < 4·h_거친격자 는 비교에서 뺍니다
EXCLUSION_CELLS = 4.0
ROUTE_FACTOR = 5.0
ROUTE_RELATIVE = 1e-2


@dataclass
class ConvergenceReport:
    h_list: List[float]
    successive: List[float]
    excluded_radius: float
    routes: Dict[str, float] = field(default_factory=dict)
    route_tolerance: float = 0.0

    @property
    def refinement_passed(self) -> bool:
        return all(b < a or b == 0.0 for a, b in zip(self.successive, self.successive[1:]))

    @property
    def routes_passed(self) -> bool:
        return all(d <= self.route_tolerance for d in self.routes.values())

    @property
    def passed(self) -> bool:
        return self.refinement_passed and self.routes_passed

    def to_dict(self) -> Dict[str, Any]:
        return {
            "h": self.h_list,
            "successive_differences": self.successive,
            "excluded_radius": self.excluded_radius,
            "route_differences": dict(sorted(self.routes.items())),
            "route_tolerance": self.route_tolerance,
            "refinement_passed": self.refinement_passed,
            "routes_passed": self.routes_passed,
            "passed": self.passed,
        }


def restrict_to_coarse(fine: np.ndarray, ratio: int) -> np.ndarray:
    """거친 격자 노드 i ↔ 고운 격자 노드 ratio·i"""
    return fine[(slice(None, None, ratio),) * fine.ndim]


def _ratios(h_list: Sequence[float]) -> List[int]:
    ratios = []
    for a, b in zip(h_list, h_list[1:]):
        r = a / b
        if abs(r - 2.0) < 1e-9:
            ratios.append(2)
        elif abs(r - 1.0) < 1e-9:
            ratios.append(1)
        else:
            raise PreconditionError(f"연속한 h 는 절반이거나 같아야 합니다: {a:g} → {b:g}")
    return ratios


def convergence_study(problem: ObstacleProblem, h_list: Sequence[float], tol: float = 1e-8,
                      method: str = "active_set", s: float = 1e-3, epsilon: float = 1e-3) -> ConvergenceReport:
    """
    Args:
        problem: 기준 문제 (계수장, R, 상자)
        h_list: 거친 것부터 고운 것 순서, 각 단계에서 절반 또는 동일
        tol: 풀이 허용치
        method: LCP 방법
        s, epsilon: 경로 비교용 벌점 매개변수 (0 이면 해당 경로 생략)

    Raises:
        PreconditionError: 빈 목록 또는 중첩되지 않는 격자
    """
    h_list = [float(h) for h in h_list]
    if not h_list:
        raise PreconditionError("h 목록이 비었습니다")
    ratios = _ratios(h_list)

    solutions = [solve_lcp(rebuild(problem, h=h), tol=tol, method=method) for h in h_list]
    excluded = EXCLUSION_CELLS * h_list[0]
    successive = []
    for ratio, coarse, fine in zip(ratios, solutions, solutions[1:]):
        keep = coarse.grid.radius >= excluded
        diff = np.abs(coarse.v - restrict_to_coarse(fine.v, ratio))
        successive.append(float(diff[keep].max(initial=0.0)))
        logger.debug(f"해상도 차: h={coarse.grid.h:g} → {fine.grid.h:g}, {successive[-1]:.3e}")

    base = solutions[0]
    scale = float(base.v.max())
    report = ConvergenceReport(h_list=h_list, successive=successive, excluded_radius=excluded,
                               route_tolerance=max(ROUTE_FACTOR * (s + epsilon + tol), ROUTE_RELATIVE * scale))
    if s > 0:
        semi = solve_penalized_semilinear(base.problem, PenaltyProfile(s), tol=tol, initial=base.v)
        report.routes["lcp_vs_semilinear"] = float(np.abs(semi.v - base.v).max())
    if epsilon > 0:
        var = solve_variational_penalty(base.problem, epsilon, tol=tol)
        report.routes["lcp_vs_variational"] = float(np.abs(var.v - base.v).max())

    logger.info(f"수렴 연구: 해상도 차 {['%.2e' % d for d in successive]}, 경로 차 {report.routes}")
    return report
