"""
반선형 벌점 경로: A v = b - q·Φ_s(v)
"""

from typing import Optional

import numpy as np

from .continuation import DEFAULT_STEPS, continuation_newton
from .lcp import activation_threshold
from .penalty import PenaltyProfile
from .problem import ObstacleProblem, ObstacleSolution, complementarity
from ..config.logger import logger


def solve_penalized_semilinear(problem: ObstacleProblem, profile: PenaltyProfile, tol: float = 1e-8,
                               steps: int = DEFAULT_STEPS, initial: Optional[np.ndarray] = None) -> ObstacleSolution:
    """
    하중 연속법과 감쇠 뉴턴으로 반선형 계를 풉니다.

    Args:
        problem: 장애물 문제
        profile: Φ_s (s > 0 이면 v ≥ 0, s < 0 이면 v ≥ -|s|)
        tol: 뉴턴 잔차 허용치
        steps: 하중 스텝 수
        initial: t = 1 에 대한 출발점 (격자 필드, 예: LCP 해)

    Raises:
        ContinuationError: 하중 스텝이 하한 아래로 줄어듦
    """
    op = problem.op
    x0 = op.restrict(initial) if initial is not None else None
    result = continuation_newton(op.reduced, problem.source(), problem.q, profile, steps=steps, tol=tol, x0=x0)

    v = result.v
    comp, _ = complementarity(problem, np.maximum(v, 0.0))
    threshold = profile.s if profile.s > 0 else activation_threshold(tol)
    logger.info(f"반선형 벌점 풀이: R={problem.R:g}, s={profile.s:g}, 뉴턴 {result.newton_iterations}회, "
                f"하중 스텝 {result.load_steps}")
    return ObstacleSolution(problem=problem, v=op.extend(v), solver_tag="semilinear", threshold=threshold,
                            comp_residual=comp, iterations=result.newton_iterations, tolerance=tol,
                            converged=result.converged,
                            extras={"s": profile.s, "load_steps": result.load_steps,
                                    "newton_residual": result.residual})
