"""
상보 문제 min(v, A v - b + q) = 0 의 직접 풀이

psor       : 사전순 투영 SOR (ω 기본 1.7)
active_set : 질량 균형 공 추정에서 출발한 활성 집합법 후 투영 SOR 연마
"""

import math
from typing import Optional

import numpy as np

from .problem import ObstacleProblem, ObstacleSolution, complementarity
from .active_set import semismooth_active_set
from ._kernels import psor_sweeps
from ..errors import PreconditionError
from ..config.logger import logger

LCP_METHODS = ("psor", "active_set")
MIN_TOL = 1e-10
CHECK_EVERY = 10


def activation_threshold(tol: float) -> float:
    return 10.0 * tol


def default_sweep_cap(problem: ObstacleProblem) -> int:
    """200·(노드 수)^{1/dim}"""
    return 200 * problem.grid.n


def ball_guess(problem: ObstacleProblem) -> np.ndarray:
    """|D_R| = R^dim 인 공을 초기 비접촉 집합으로 (내부 벡터)"""
    dim = problem.grid.dim
    if problem.q == 0.0:
        return np.ones(problem.op.interior.size, dtype=bool)
    unit_ball = math.pi ** (dim / 2) / math.gamma(dim / 2 + 1)
    rho = (problem.source_strength * problem.R ** dim / unit_ball) ** (1.0 / dim)
    return problem.op.restrict(problem.grid.radius) < rho


def _psor(problem: ObstacleProblem, v: np.ndarray, tol: float, omega: float, max_sweeps: int,
          check_every: int = CHECK_EVERY) -> tuple[np.ndarray, int, float]:
    A = problem.op.reduced
    diag = problem.op.reduced_diagonal
    rhs = problem.load()
    sweeps = 0
    residual, _ = complementarity(problem, v)
    while residual > tol and sweeps < max_sweeps:
        batch = min(check_every, max_sweeps - sweeps)
        psor_sweeps(A.indptr, A.indices, A.data, diag, v, rhs, omega, batch)
        sweeps += batch
        residual, _ = complementarity(problem, v)
    return v, sweeps, residual


def solve_lcp(problem: ObstacleProblem, tol: float = 1e-8, omega: float = 1.7, method: str = "active_set",
              max_sweeps: Optional[int] = None) -> ObstacleSolution:
    """
    장애물 문제를 상보 문제로 풉니다.

    Args:
        problem: 장애물 문제
        tol: 상보 잔차 허용치 (≥ 1e-10)
        omega: SOR 이완 계수, (0, 2)
        method: "psor" 또는 "active_set"
        max_sweeps: 스윕 상한 (기본 200·(노드 수)^{1/dim})

    Returns:
        ObstacleSolution (상한 초과 시 converged=False 인 부분 해)
    """
    if tol < MIN_TOL:
        raise PreconditionError(f"tol 은 {MIN_TOL:g} 이상이어야 합니다: {tol}")
    if not 0.0 < omega < 2.0:
        raise PreconditionError(f"ω 는 (0, 2) 안에 있어야 합니다: {omega}")
    if method not in LCP_METHODS:
        raise PreconditionError(f"알 수 없는 LCP 방법입니다: {method} (지원: {', '.join(LCP_METHODS)})")

    cap = max_sweeps if max_sweeps is not None else default_sweep_cap(problem)
    n = problem.op.interior.size
    extras = {}

    if method == "active_set":
        result = semismooth_active_set(problem.op.reduced, problem.load(), free0=ball_guess(problem))
        v = np.maximum(result.v, 0.0)
        v, sweeps, residual = _psor(problem, v, tol, omega, cap)
        iterations = result.iterations
        extras = {"active_set_iterations": result.iterations, "active_set_cycled": result.cycled,
                  "polish_sweeps": sweeps}
        tag = "lcp-active-set"
    else:
        v, sweeps, residual = _psor(problem, np.zeros(n), tol, omega, cap)
        iterations = sweeps
        tag = "lcp-psor"

    converged = residual <= tol
    if not converged:
        logger.warning(f"LCP 미수렴: R={problem.R:g}, 상보 잔차 {residual:.3e} > {tol:g} ({cap} 스윕)")
    else:
        logger.info(f"LCP 수렴: R={problem.R:g}, {tag}, 반복 {iterations}, 잔차 {residual:.2e}")

    return ObstacleSolution(problem=problem, v=problem.op.extend(v), solver_tag=tag,
                            threshold=activation_threshold(tol), comp_residual=residual, iterations=iterations,
                            tolerance=tol, converged=converged, extras=extras)
