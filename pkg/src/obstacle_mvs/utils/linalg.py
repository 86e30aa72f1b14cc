"""
대칭 양의 정부호 희소 선형계 해법

작은 계는 희소 LU로 직접 풀고, 큰 계는 pyamg smoothed aggregation 전처리를 붙인 켤레기울기법(PCG)으로 풉니다.
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import pyamg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import SolverStagnationError
from ..config.logger import logger

DIRECT_LIMIT = 60_000
STAGNATION_WINDOW = 500


@dataclass
class PCGInfo:
    """PCG 수렴 정보"""
    iterations: int = 0
    converged: bool = False
    residual_history: List[float] = field(default_factory=list)

    @property
    def final_residual(self) -> float:
        return self.residual_history[-1] if self.residual_history else float("nan")


def amg_preconditioner(A: sp.spmatrix) -> spla.LinearOperator:
    """smoothed aggregation V-사이클 전처리기"""
    ml = pyamg.smoothed_aggregation_solver(sp.csr_matrix(A), symmetry="symmetric")
    return ml.aspreconditioner(cycle="V")


def pcg(A: sp.spmatrix, b: np.ndarray, x0: Optional[np.ndarray] = None, M: Optional[spla.LinearOperator] = None,
        tol: float = 1e-10, maxiter: Optional[int] = None,
        stagnation_window: int = STAGNATION_WINDOW) -> tuple[np.ndarray, PCGInfo]:
    """
    전처리 켤레기울기법

    Args:
        A: 대칭 양의 정부호 행렬
        b: 우변
        x0: 초기 추정
        M: 전처리기 (없으면 항등)
        tol: 상대 잔차 ||r|| / ||b|| 허용치
        maxiter: 최대 반복 수
        stagnation_window: 이 횟수 동안 최소 잔차가 갱신되지 않으면 정체로 판단

    Returns:
        (해, PCGInfo)

    Raises:
        SolverStagnationError: 잔차 정체
    """
    n = A.shape[0]
    maxiter = maxiter or max(10 * n, 1000)
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float)

    b_norm = float(np.linalg.norm(b))
    info = PCGInfo()
    if b_norm == 0.0:
        info.converged = True
        info.residual_history.append(0.0)
        return np.zeros(n), info

    r = b - A @ x
    z = M @ r if M is not None else r.copy()
    p = z.copy()
    rz = float(r @ z)

    best, best_iteration = np.inf, 0
    for it in range(1, maxiter + 1):
        rel = float(np.linalg.norm(r)) / b_norm
        info.residual_history.append(rel)
        if rel <= tol:
            info.converged = True
            info.iterations = it - 1
            return x, info
        if rel < best:
            best, best_iteration = rel, it
        elif it - best_iteration >= stagnation_window:
            raise SolverStagnationError(
                f"PCG 잔차가 {stagnation_window}회 동안 개선되지 않았습니다 (최소 {best:.3e})",
                info.residual_history,
            )

        Ap = A @ p
        alpha = rz / float(p @ Ap)
        x += alpha * p
        r -= alpha * Ap
        z = M @ r if M is not None else r.copy()
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new

    info.iterations = maxiter
    info.residual_history.append(float(np.linalg.norm(r)) / b_norm)
    info.converged = info.residual_history[-1] <= tol
    if not info.converged:
        logger.warning(f"PCG가 {maxiter}회 안에 수렴하지 않았습니다 (상대 잔차 {info.residual_history[-1]:.3e})")
    return x, info


def solve_spd(A: sp.spmatrix, rhs: np.ndarray, tol: float = 1e-13, direct_limit: int = DIRECT_LIMIT) -> np.ndarray:
    """크기에 따라 직접법 또는 AMG-PCG로 A x = rhs를 풉니다."""
    if A.shape[0] == 0:
        return np.zeros(0)
    if A.shape[0] <= direct_limit:
        return np.asarray(spla.spsolve(sp.csc_matrix(A), rhs), dtype=float)
    x, info = pcg(A, rhs, M=amg_preconditioner(A), tol=tol)
    logger.debug(f"AMG-PCG: n={A.shape[0]}, 반복={info.iterations}, 잔차={info.final_residual:.2e}")
    return x
