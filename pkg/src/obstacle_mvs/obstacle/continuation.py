"""
하중 매개변수 t 에 대한 연속법 + 감쇠 뉴턴

    F_t(v) = A v - rhs + t·weight·Φ(v) = 0,   t: 0 → 1

는 볼록 에너지 E_t(v) = ½vᵀAv - rhsᵀv + t·Σ weight_i Ψ(v_i) 의 임계점 조건입니다. 야코비안
A + t·diag(weight·Φ′(v)) 은 SPD 이므로 뉴턴 방향은 항상 하강 방향이고, Armijo 선탐색으로 감쇠합니다.
한 스텝에서 뉴턴이 실패하면 스텝을 반으로 줄입니다.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .penalty import PenaltyProfile
from ..errors import ContinuationError
from ..utils.linalg import solve_spd
from ..config.logger import logger

DEFAULT_STEPS = 10
MAX_NEWTON = 50
MIN_STEP = 2.0 ** -10
ARMIJO_C = 1e-4
MIN_DAMPING = 2.0 ** -30


@dataclass
class ContinuationResult:
    v: np.ndarray
    newton_iterations: int
    load_steps: int
    residual: float
    converged: bool


class _Newton:
    def __init__(self, A: sp.csr_matrix, rhs: np.ndarray, weight: np.ndarray, profile: PenaltyProfile, tol: float):
        self.A = A
        self.rhs = rhs
        self.weight = np.broadcast_to(np.asarray(weight, dtype=float), rhs.shape)
        self.profile = profile
        self.scale = tol * (1.0 + float(np.max(np.abs(rhs), initial=0.0)))

    def residual(self, v: np.ndarray, t: float) -> np.ndarray:
        return self.A @ v - self.rhs + t * self.weight * self.profile.phi(v)

    def energy(self, v: np.ndarray, t: float) -> float:
        return float(0.5 * v @ (self.A @ v) - self.rhs @ v + t * np.sum(self.weight * self.profile.psi(v)))

    def solve(self, v: np.ndarray, t: float) -> Optional[tuple[np.ndarray, int, float]]:
        """수렴하면 (v, 반복 수, 잔차), 실패하면 None"""
        v = v.copy()
        for it in range(1, MAX_NEWTON + 1):
            F = self.residual(v, t)
            norm = float(np.max(np.abs(F), initial=0.0))
            if norm <= self.scale:
                return v, it - 1, norm
            J = self.A + sp.diags(t * self.weight * self.profile.dphi(v))
            d = -solve_spd(sp.csr_matrix(J), F)

            trial = v + d
            if float(np.max(np.abs(self.residual(trial, t)))) < norm:
                v = trial
                continue
            energy = self.energy(v, t)
            slope = float(F @ d)
            alpha = 1.0
            while self.energy(v + alpha * d, t) > energy + ARMIJO_C * alpha * slope:
                alpha *= 0.5
                if alpha < MIN_DAMPING:
                    return None
            v = v + alpha * d
        F = self.residual(v, t)
        norm = float(np.max(np.abs(F), initial=0.0))
        return (v, MAX_NEWTON, norm) if norm <= self.scale else None


def continuation_newton(A: sp.csr_matrix, rhs: np.ndarray, weight: np.ndarray, profile: PenaltyProfile,
                        steps: int = DEFAULT_STEPS, tol: float = 1e-8,
                        x0: Optional[np.ndarray] = None) -> ContinuationResult:
    """
    Args:
        A: 내부 SPD 행렬
        rhs: 우변
        weight: 비선형 항 가중치 (q 또는 f, 스칼라 가능)
        profile: Φ_s
        steps: 초기 하중 스텝 수
        tol: ||F||∞ ≤ tol·(1 + ||rhs||∞)
        x0: t = 1 에 대한 출발점. 그 자리에서 바로 뉴턴이 수렴하지 않으면 t = 0 부터 연속법을 진행

    Raises:
        ContinuationError: 스텝이 2^-10 아래로 줄어듦
    """
    newton = _Newton(A, rhs, weight, profile, tol)
    if x0 is not None:
        outcome = newton.solve(np.asarray(x0, dtype=float), 1.0)
        if outcome is not None:
            v, its, residual = outcome
            return ContinuationResult(v=v, newton_iterations=its, load_steps=1, residual=residual, converged=True)
        logger.debug("출발점에서 뉴턴이 수렴하지 않아 t = 0 부터 연속법을 진행합니다")

    v = solve_spd(A, rhs)
    t = 0.0
    dt = 1.0 / steps
    total, taken, residual = 0, 0, 0.0

    while t < 1.0:
        t_next = min(1.0, t + dt)
        outcome = newton.solve(v, t_next)
        if outcome is None:
            dt *= 0.5
            logger.debug(f"연속법 스텝 축소: t={t:.4f}, dt={dt:.3g}")
            if dt < MIN_STEP:
                raise ContinuationError(f"연속법 스텝이 하한 아래로 줄었습니다 (t={t:.4f}, dt={dt:.3g})", t, dt)
            continue
        v, its, residual = outcome
        total += its
        taken += 1
        t = t_next

    logger.debug(f"연속법 완료: 스텝 {taken}, 뉴턴 반복 {total}, 잔차 {residual:.3e}")
    return ContinuationResult(v=v, newton_iterations=total, load_steps=taken, residual=residual, converged=True)
