"""
사전순(lexicographic) 투영 스윕 커널

CSR 배열을 직접 받아 제자리(in-place)에서 갱신합니다. numba가 없으면 순수 파이썬으로 동작합니다
(느리지만 결과는 같음).
"""

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        """numba가 없을 때의 대체 데코레이터"""

        def decorator(func):
            return func

        if len(args) == 1 and callable(args[0]):
            return args[0]
        return decorator


@njit(cache=True)
def psor_sweeps(indptr: np.ndarray, indices: np.ndarray, data: np.ndarray, diag: np.ndarray,
                v: np.ndarray, rhs: np.ndarray, omega: float, n_sweeps: int) -> None:
    """v ≥ 0 으로 투영하는 SOR 스윕 (A v - rhs 의 상보 문제)"""
    n = v.shape[0]
    for _ in range(n_sweeps):
        for i in range(n):
            y = -rhs[i]
            for k in range(indptr[i], indptr[i + 1]):
                y += data[k] * v[indices[k]]
            value = v[i] - omega * y / diag[i]
            v[i] = value if value > 0.0 else 0.0


@njit(cache=True)
def penalty_sweeps(indptr: np.ndarray, indices: np.ndarray, data: np.ndarray, diag: np.ndarray,
                   v: np.ndarray, rhs: np.ndarray, upper: float, n_sweeps: int) -> None:
    """
    ½vᵀAv - rhsᵀv + upper·Σmax(-v, 0) 의 좌표 하강 스윕

    한 좌표의 최소점은 r = Σ_{j≠i} A_ij v_j - rhs_i 에 대해
    r ≤ 0 → -r/a,  0 < r ≤ upper → 0,  r > upper → (upper - r)/a.
    """
    n = v.shape[0]
    for _ in range(n_sweeps):
        for i in range(n):
            r = -rhs[i]
            for k in range(indptr[i], indptr[i + 1]):
                j = indices[k]
                if j != i:
                    r += data[k] * v[j]
            if r <= 0.0:
                v[i] = -r / diag[i]
            elif r <= upper:
                v[i] = 0.0
            else:
                v[i] = (upper - r) / diag[i]
