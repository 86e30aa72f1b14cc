"""
일반 자료의 틈(gap) 문제: L w = Φ_s(w) f,  w = g (경계)

A ≈ -L 이므로 내부 식은 A_II w_I = -A_IB g_B - f·Φ_s(w_I) 이고, 반선형 경로와 같은 연속법 뉴턴으로 풉니다.
이 문제는 원래의 w 변수를 그대로 씁니다.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, Optional

import numpy as np
from scipy import ndimage

from .continuation import DEFAULT_STEPS, continuation_newton
from .penalty import PenaltyProfile
from ..discretization.assembly import DiscreteOperator
from ..errors import PreconditionError
from ..config.logger import logger

DEFAULT_G_MAX = 0.1


@dataclass(eq=False)
class GeneralObstacleProblem:
    """λ̄ ≤ f ≤ Λ̄ 인 밀도 f 와 경계 자료 g ≥ 0"""
    op: DiscreteOperator
    f: np.ndarray
    g: np.ndarray
    lam_bar: float
    Lam_bar: float

    @property
    def grid(self):
        return self.op.grid

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lambda_bar": self.lam_bar,
            "Lambda_bar": self.Lam_bar,
            "g_max": float(self.g[self.grid.boundary_mask].max()),
        }


def linear_ramp(op: DiscreteOperator, g_max: float = DEFAULT_G_MAX) -> np.ndarray:
    """g = g_max·(1 + x_1/M)/2 (경계 노드에만 값)"""
    grid = op.grid
    ramp = g_max * 0.5 * (1.0 + grid.coordinates()[0] / grid.M)
    return np.where(grid.boundary_mask, ramp, 0.0)


def make_general_problem(op: DiscreteOperator, f: Optional[np.ndarray] = None, g: Optional[np.ndarray] = None,
                         g_max: float = DEFAULT_G_MAX) -> GeneralObstacleProblem:
    """
    Args:
        op: 조립된 작용소
        f: 밀도 (기본 1, 스칼라 가능)
        g: 경계 자료 (기본 선형 경사, g_max 사용)

    Raises:
        PreconditionError: f < 0, g < 0, 또는 g ≡ 0
    """
    grid = op.grid
    f_field = np.broadcast_to(np.asarray(1.0 if f is None else f, dtype=float), grid.shape).copy()
    g_field = linear_ramp(op, g_max) if g is None else np.asarray(g, dtype=float)
    if g_field.shape != grid.shape:
        raise PreconditionError("경계 자료 g 의 모양이 격자와 다릅니다")

    lam_bar, Lam_bar = float(f_field.min()), float(f_field.max())
    if lam_bar < 0:
        raise PreconditionError(f"f 는 음이 아니어야 합니다 (min f = {lam_bar:g})")
    if lam_bar == 0:
        logger.warning("λ̄ = 0 : 퇴화된 밀도 (벌점 항이 일부 또는 전부 비활성)")
    boundary = g_field[grid.boundary_mask]
    if boundary.min() < 0 or not np.any(boundary > 0):
        raise PreconditionError("경계 자료 g 는 음이 아니고 항등적으로 0 이 아니어야 합니다")

    return GeneralObstacleProblem(op=op, f=f_field, g=np.where(grid.boundary_mask, g_field, 0.0),
                                  lam_bar=lam_bar, Lam_bar=Lam_bar)


@dataclass(eq=False)
class GapSolution:
    """(w, h_diag) 쌍과 풀이 정보. 튜플처럼 풀어 쓸 수 있습니다."""
    w: np.ndarray
    h_diag: np.ndarray
    profile: PenaltyProfile
    newton_iterations: int = 0
    converged: bool = True
    extras: Dict[str, Any] = field(default_factory=dict)

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter((self.w, self.h_diag))


def solve_general_gap(problem: GeneralObstacleProblem, profile: PenaltyProfile, tol: float = 1e-8,
                      steps: int = DEFAULT_STEPS, initial: Optional[np.ndarray] = None) -> GapSolution:
    """
    반선형 경로로 w 를 구하고 진단 밀도 h_diag = Φ_s(w)·f 를 돌려줍니다.

    Raises:
        ContinuationError: 하중 스텝이 하한 아래로 줄어듦
    """
    op = problem.op
    rhs = -(op.boundary_coupling @ problem.g.reshape(-1)[op.boundary])
    x0 = op.restrict(initial) if initial is not None else None
    result = continuation_newton(op.reduced, rhs, op.restrict(problem.f), profile, steps=steps, tol=tol, x0=x0)

    w = op.extend(result.v, problem.g)
    h_diag = profile.phi(w) * problem.f
    logger.info(f"일반 틈 문제 풀이: s={profile.s:g}, 뉴턴 {result.newton_iterations}회, min w={w.min():.3e}")
    return GapSolution(w=w, h_diag=h_diag, profile=profile, newton_iterations=result.newton_iterations,
                       converged=result.converged, extras={"newton_residual": result.residual})


def gap_report(w: np.ndarray, h_diag: np.ndarray, f: np.ndarray, s: float,
               interior_cells: int = 2, level: float = 1e-2) -> Dict[str, Any]:
    """
    h_diag 가 0 과 f 사이의 값을 갖는 틈 노드의 비율과 접촉 집합 요약

    접촉 집합은 {w ≤ |s|}, 틈은 {level·f < h_diag < (1 - level)·f}. 접촉 집합 내부는 interior_cells 만큼 침식한 집합입니다.
    """
    f = np.broadcast_to(np.asarray(f, dtype=float), w.shape)
    gap = (h_diag > level * f) & (h_diag < (1.0 - level) * f)
    contact = w <= abs(s)
    contact_interior = ndimage.binary_erosion(contact, iterations=interior_cells)
    positive = w >= max(s, 0.0)
    cutoff = 0.0 if s > 0 else -abs(s)
    return {
        "s": s,
        "gap_fraction": float(gap.mean()),
        "gap_nodes": int(gap.sum()),
        "contact_nodes": int(contact.sum()),
        "h_equals_f_above_s": bool(np.allclose(h_diag[positive], f[positive])),
        "h_zero_below_cutoff": bool(np.all(h_diag[w <= cutoff] == 0.0)),
        "max_h_on_contact": float(h_diag[contact].max(initial=0.0)),
        "max_h_on_contact_interior": float(h_diag[contact_interior].max(initial=0.0)),
        "contact_interior_nodes": int(contact_interior.sum()),
    }
