"""
변분 벌점 경로

J_ε(w) = ∫ a∇w·∇w - 2R^{-n}w + 2Φ_ε(G - w),  Φ_ε(t) = -t/ε (t ≤ 0), 0 (t > 0)

를 v = G - w 로 옮기면 (상수 제외) ½vᵀAv - (b - q)ᵀv + (1/ε)·Σmax(-v, 0) 가 되어, 상한 1/ε 의 세 집합
준매끄러운 뉴턴으로 정확히 풀립니다. 1/ε ≥ q 이면 해는 LCP 해와 같습니다.
"""

import numpy as np

from .active_set import semismooth_active_set
from .lcp import activation_threshold, default_sweep_cap
from .problem import ObstacleProblem, ObstacleSolution
from ._kernels import penalty_sweeps
from ..errors import PreconditionError
from ..utils.linalg import solve_spd
from ..config.logger import logger

CHECK_EVERY = 10


def first_order_residual(y: np.ndarray, v: np.ndarray, upper: float) -> float:
    """v>0 → |y|, v<0 → |y - upper|, v=0 → dist(y, [0, upper])"""
    at_zero = np.maximum(-y, 0.0) + np.maximum(y - upper, 0.0)
    r = np.where(v > 0, np.abs(y), np.where(v < 0, np.abs(y - upper), at_zero))
    return float(np.max(r, initial=0.0))


def solve_variational_penalty(problem: ObstacleProblem, epsilon: float, tol: float = 1e-8) -> ObstacleSolution:
    """
    이산 J_ε 를 최소화합니다. 결과의 w 속성이 w_ε 입니다.

    Args:
        problem: 장애물 문제
        epsilon: 벌점 매개변수 (> 0)
        tol: 1차 최적성 잔차 허용치
    """
    if not epsilon > 0:
        raise PreconditionError(f"ε 은 양수여야 합니다: {epsilon}")
    op = problem.op
    A, rhs, upper = op.reduced, problem.load(), 1.0 / epsilon

    result = semismooth_active_set(A, rhs, upper=upper)
    v = result.v
    residual = first_order_residual(A @ v - rhs, v, upper)
    sweeps = 0
    cap = default_sweep_cap(problem)
    while residual > tol and sweeps < cap:
        # 집합 반복이 고정되지 않은 경우의 단조 좌표 하강
        penalty_sweeps(A.indptr, A.indices, A.data, op.reduced_diagonal, v, rhs, upper, CHECK_EVERY)
        sweeps += CHECK_EVERY
        residual = first_order_residual(A @ v - rhs, v, upper)

    converged = residual <= tol
    if not converged:
        logger.warning(f"변분 벌점 미수렴: ε={epsilon:g}, 잔차 {residual:.3e}")
    logger.info(f"변분 벌점 풀이: R={problem.R:g}, ε={epsilon:g}, 집합 반복 {result.iterations}, 잔차 {residual:.2e}")
    return ObstacleSolution(problem=problem, v=op.extend(v), solver_tag="variational-penalty",
                            threshold=activation_threshold(tol), comp_residual=residual,
                            iterations=result.iterations + sweeps, tolerance=tol, converged=converged,
                            extras={"epsilon": epsilon, "descent_sweeps": sweeps})


def energy(problem: ObstacleProblem, w: np.ndarray) -> float:
    """J(w) = h^d (wᵀAw - 2qΣw), 경계값 0"""
    op = problem.op
    wi = op.restrict(w)
    return float(problem.grid.cell_measure * (wi @ (op.reduced @ wi) - 2.0 * problem.q * wi.sum()))


def penalized_energy(problem: ObstacleProblem, w: np.ndarray, epsilon: float) -> float:
    """J_ε(w) = J(w) + (2h^d/ε)·Σmax(w - G, 0)"""
    G = problem.ensure_green().values
    excess = np.maximum(np.asarray(w) - G, 0.0).sum()
    return energy(problem, w) + 2.0 * problem.grid.cell_measure * excess / epsilon


def unconstrained_bound_check(solution: ObstacleSolution, tol: float = 1e-8) -> dict:
    """
    장애물이 없는 최소화자 w̄ (A w̄ = q, 경계 0) 에 대해 w_0 = G - v ≤ w̄ 인지 확인합니다.
    """
    problem = solution.problem
    op = problem.op
    w_bar = op.extend(solve_spd(op.reduced, np.full(op.interior.size, problem.q)))
    excess = solution.w - w_bar
    scale = max(1.0, float(np.abs(w_bar).max()))
    worst = np.unravel_index(int(np.argmax(excess)), excess.shape)
    return {
        "passed": bool(excess.max() <= tol * scale),
        "max_excess": float(excess.max()),
        "worst_node": [int(i) for i in worst],
        "w0_at_x0": float(solution.w[problem.x0]),
        "w_bar_at_x0": float(w_bar[problem.x0]),
    }
