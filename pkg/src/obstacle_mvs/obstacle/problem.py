"""
장애물 문제와 해의 자료형

세 풀이 경로(상보 문제, 반선형 벌점, 변분 벌점)는 모두 v = G - w 변수에서 동작합니다. 이때 장애물은 0이고
이산 문제는 다음 상보 문제(LCP)가 됩니다.

    v ≥ 0,  y = A v - b + q ≥ 0,  v·y = 0,   b = e_{x0}/h^dim,  q = R^{-dim}

v 변수에서는 G가 필요 없으므로 그린 함수는 w를 요구할 때만 계산합니다 (ensure_green).
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..discretization.assembly import DiscreteOperator, assemble
from ..discretization.grid import build_grid
from ..greens.green import GreensFunction, solve_green
from ..errors import PreconditionError


@dataclass(eq=False)
class ObstacleProblem:
    """평균값 집합 D_R(x0)을 정의하는 장애물 문제"""
    op: DiscreteOperator
    R: float
    source_strength: float = 1.0
    green: Optional[GreensFunction] = None

    def __post_init__(self):
        if not self.R > 0:
            raise PreconditionError(f"R은 양수여야 합니다: {self.R}")

    @property
    def grid(self):
        return self.op.grid

    @property
    def x0(self) -> Tuple[int, ...]:
        return self.grid.center_index

    @property
    def q(self) -> float:
        """밀도 R^{-dim} (R = ∞ 이면 0)"""
        return 0.0 if math.isinf(self.R) else self.R ** (-self.grid.dim)

    def source(self) -> np.ndarray:
        """내부 벡터 b"""
        full = np.zeros(self.grid.shape)
        full[self.x0] = self.source_strength / self.grid.cell_measure
        return self.op.restrict(full)

    def load(self) -> np.ndarray:
        """LCP 우변 b - q"""
        return self.source() - self.q

    def ensure_green(self) -> GreensFunction:
        if self.green is None:
            self.green = solve_green(self.op, self.x0)
        return self.green

    def to_dict(self) -> Dict[str, Any]:
        return {"R": self.R, "q": self.q, "source_strength": self.source_strength, "x0": list(self.x0)}


def make_problem(op: DiscreteOperator, R: float, green: Optional[GreensFunction] = None,
                 source_strength: float = 1.0) -> ObstacleProblem:
    if green is not None and not green.grid.same_as(op.grid):
        raise PreconditionError("그린 함수와 작용소의 격자가 다릅니다")
    return ObstacleProblem(op=op, R=float(R), source_strength=float(source_strength), green=green)


def rebuild(problem: ObstacleProblem, M: Optional[float] = None, h: Optional[float] = None) -> ObstacleProblem:
    """같은 계수장, 평행이동, R 로 다른 상자 또는 간격에서 문제를 다시 만듭니다."""
    grid = problem.grid
    new_grid = build_grid(grid.dim, grid.M if M is None else M, grid.h if h is None else h)
    op = assemble(new_grid, problem.op.coefficients, problem.op.offset)
    return ObstacleProblem(op=op, R=problem.R, source_strength=problem.source_strength)


def complementarity(problem: ObstacleProblem, v: np.ndarray) -> Tuple[float, np.ndarray]:
    """
    상보 잔차 max_i |min(v_i, y_i)| 와 y = A v - b + q (내부 벡터)
    """
    y = problem.op.reduced @ v - problem.load()
    return float(np.max(np.abs(np.minimum(v, y)), initial=0.0)), y


@dataclass(eq=False)
class ObstacleSolution:
    """v = G - w 와 풀이 진단 정보"""
    problem: ObstacleProblem
    v: np.ndarray
    solver_tag: str
    threshold: float
    comp_residual: float
    iterations: int
    tolerance: float
    converged: bool
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def grid(self):
        return self.problem.grid

    @property
    def R(self) -> float:
        return self.problem.R

    @property
    def active_set(self) -> np.ndarray:
        """비접촉 집합 {v > θ}"""
        return self.v > self.threshold

    @property
    def w(self) -> np.ndarray:
        return self.problem.ensure_green().values - self.v

    def to_dict(self) -> Dict[str, Any]:
        return {
            "R": self.R,
            "solver": self.solver_tag,
            "converged": self.converged,
            "iterations": self.iterations,
            "comp_residual": self.comp_residual,
            "tolerance": self.tolerance,
            "threshold": self.threshold,
            "active_nodes": int(self.active_set.sum()),
            "max_v": float(self.v.max()),
            **self.extras,
        }
