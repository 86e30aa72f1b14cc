"""
원-쌍대 활성 집합 (준매끄러운 뉴턴) 반복

    min ½vᵀAv - rhsᵀv + upper·Σmax(-v, 0)

의 최적성 조건을 y = A v - rhs 에 대해 세 집합으로 나눕니다 (c = 1/diag(A)).

    P = {v - c·y > 0}           → y = 0
    N = {v - c·(y - upper) < 0} → y = upper
    Z = 나머지                   → v = 0

upper = ∞ 이면 N은 비고 LCP의 활성 집합법이 됩니다. M-행렬에서는 집합이 유한 번 안에 고정됩니다.
다음 집합은 현재 집합만으로 정해지므로, 이미 나온 (P, N) 이 다시 나오면 순환으로 보고 멈춥니다.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from ..utils.linalg import solve_spd
from ..config.logger import logger

MAX_ACTIVE_SET_ITER = 100


def _state_key(positive: np.ndarray, negative: np.ndarray) -> bytes:
    return np.packbits(positive).tobytes() + np.packbits(negative).tobytes()


@dataclass
class ActiveSetResult:
    v: np.ndarray
    iterations: int
    converged: bool
    cycled: bool = False


def semismooth_active_set(A: sp.csr_matrix, rhs: np.ndarray, upper: float = np.inf,
                          free0: Optional[np.ndarray] = None,
                          max_iter: int = MAX_ACTIVE_SET_ITER) -> ActiveSetResult:
    """
    Args:
        A: SPD M-행렬 (내부 블록)
        rhs: 우변
        upper: 음수 쪽 벌점 기울기 (∞ 이면 v ≥ 0 제약)
        free0: 초기 P 집합 (없으면 전체)
        max_iter: 최대 반복 수
    """
    n = A.shape[0]
    c = 1.0 / A.diagonal()
    positive = np.ones(n, dtype=bool) if free0 is None else np.asarray(free0, dtype=bool).copy()
    negative = np.zeros(n, dtype=bool)
    finite = np.isfinite(upper)

    seen = {_state_key(positive, negative)}
    v = np.zeros(n)
    for it in range(1, max_iter + 1):
        free = positive | negative
        v = np.zeros(n)
        if free.any():
            target = rhs[free] + (upper * negative[free] if finite else 0.0)
            v[free] = solve_spd(A[free][:, free], target)

        y = A @ v - rhs
        new_positive = v - c * y > 0
        new_negative = (v - c * (y - upper) < 0) if finite else np.zeros(n, dtype=bool)
        changed = int(np.count_nonzero(new_positive != positive) + np.count_nonzero(new_negative != negative))
        logger.debug(f"활성 집합 반복 {it}: |P|={int(new_positive.sum())}, |N|={int(new_negative.sum())}, 변경={changed}")
        if changed == 0:
            return ActiveSetResult(v=v, iterations=it, converged=True)
        positive, negative = new_positive, new_negative
        key = _state_key(positive, negative)
        if key in seen:
            logger.warning(f"활성 집합 반복 {it}회에서 이전 집합으로 돌아와 멈춥니다")
            return ActiveSetResult(v=v, iterations=it, converged=False, cycled=True)
        seen.add(key)

    logger.warning(f"활성 집합 반복이 {max_iter}회 안에 고정되지 않았습니다")
    return ActiveSetResult(v=v, iterations=max_iter, converged=False)
