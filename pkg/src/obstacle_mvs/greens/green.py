"""
상자 위 이산 그린 함수

A G = e_{x0}/h^dim (내부), G = 0 (경계) 를 AMG 전처리 PCG로 풉니다. 델타는 셀 측도 h^dim 아래에서
적분이 1이 되도록 정규화합니다.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..discretization.assembly import DiscreteOperator
from ..errors import PreconditionError, UnsupportedDimensionError
from ..utils.linalg import amg_preconditioner, pcg
from ..config.logger import logger

GREEN_TOL = 1e-10


@dataclass(eq=False)
class GreensFunction:
    """이산 그린 함수 G(·, x0)"""
    values: np.ndarray
    source_index: Tuple[int, ...]
    source_scale: float
    op: DiscreteOperator
    iterations: int = 0
    converged: bool = True
    residual_history: List[float] = field(default_factory=list)

    @property
    def grid(self):
        return self.op.grid

    @property
    def peak(self) -> float:
        return float(self.values[self.source_index])

    def distance(self) -> np.ndarray:
        """소스 노드까지의 거리장"""
        if self.source_index == self.grid.center_index:
            return self.grid.radius
        center = self.grid.node_position(self.source_index)
        coords = self.grid.coordinates()
        return np.sqrt(sum((c - center[k]) ** 2 for k, c in enumerate(coords)))

    def residual(self) -> float:
        """내부 상대 잔차 ||A G - b|| / ||b||"""
        b = _source_vector(self.op, self.source_index)
        r = self.op.reduced @ self.op.restrict(self.values) - b
        return float(np.linalg.norm(r) / np.linalg.norm(b))


@dataclass
class CappedGreen:
    """G_{sm,r} = min(G, C_{sm,r})"""
    values: np.ndarray
    cap_level: float
    radius: float


@dataclass
class BoundReport:
    """c1/|x|^{n-2} ≤ G ≤ c2/|x|^{n-2} 적합 결과"""
    c1: float
    c2: float
    annulus: Tuple[float, float]
    ratio_bound: float
    samples: int

    @property
    def ratio(self) -> float:
        return self.c2 / self.c1 if self.c1 > 0 else float("inf")

    @property
    def passed(self) -> bool:
        return bool(self.c1 > 0 and self.ratio <= self.ratio_bound)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "c1": self.c1,
            "c2": self.c2,
            "ratio": self.ratio,
            "ratio_bound": self.ratio_bound,
            "annulus": list(self.annulus),
            "samples": self.samples,
            "passed": self.passed,
        }


def _source_vector(op: DiscreteOperator, source: Tuple[int, ...]) -> np.ndarray:
    full = np.zeros(op.grid.shape)
    full[source] = 1.0 / op.grid.cell_measure
    return op.restrict(full)


def solve_green(op: DiscreteOperator, x0: Optional[Sequence[int]] = None, tol: float = GREEN_TOL) -> GreensFunction:
    """
    그린 함수를 계산합니다.

    Args:
        op: 조립된 작용소 (경계 노드는 영 디리클레)
        x0: 소스 노드 인덱스 (기본: 상자 중심)
        tol: PCG 상대 잔차 허용치

    Returns:
        GreensFunction

    Raises:
        PreconditionError: 소스가 경계층 또는 경계 인접 노드
        SolverStagnationError: 잔차 정체 (잔차 이력 포함)
    """
    grid = op.grid
    source = tuple(int(i) for i in (x0 if x0 is not None else grid.center_index))
    if len(source) != grid.dim or min(source) < 2 or max(source) > grid.n - 3:
        raise PreconditionError(f"소스 노드 {source}는 경계에서 두 셀 이상 떨어져 있어야 합니다")

    b = _source_vector(op, source)
    values, info = pcg(op.reduced, b, M=amg_preconditioner(op.reduced), tol=tol)
    if not info.converged:
        logger.warning(f"그린 함수 PCG 미수렴: 잔차 {info.final_residual:.3e}")

    green = GreensFunction(values=op.extend(values), source_index=source, source_scale=1.0 / grid.cell_measure,
                           op=op, iterations=info.iterations, converged=info.converged,
                           residual_history=info.residual_history)
    logger.debug(f"그린 함수 계산: 소스 {source}, 반복 {info.iterations}, G(x0)={green.peak:.6g}")
    return green


def _shell(green: GreensFunction, r: float) -> np.ndarray:
    h = green.grid.h
    if r < 2 * h:
        raise PreconditionError(f"반지름 r={r:g} 는 2h={2 * h:g} 이상이어야 합니다")
    shell = np.abs(green.distance() - r) <= 0.5 * h
    shell &= green.grid.interior_mask
    if not shell.any():
        raise PreconditionError(f"반지름 r={r:g} 의 구면 표본이 비어 있습니다")
    return shell


def cap_levels(green: GreensFunction, r: float) -> Tuple[float, float]:
    """구면 ∂B_r 위 G의 최솟값 C_sm,r 과 최댓값 C_big,r"""
    samples = green.values[_shell(green, r)]
    return float(samples.min()), float(samples.max())


def cap_green(green: GreensFunction, r: float) -> CappedGreen:
    c_sm, _ = cap_levels(green, r)
    return CappedGreen(values=np.minimum(green.values, c_sm), cap_level=c_sm, radius=float(r))


def spherical_means(green: GreensFunction, radii: Sequence[float]) -> np.ndarray:
    """구면 껍질 위 G의 평균"""
    return np.array([float(green.values[_shell(green, r)].mean()) for r in radii])


def check_lsw_bounds(green: GreensFunction, annulus: Tuple[float, float],
                     ratio_bound: Optional[float] = None) -> BoundReport:
    """
    고리 영역에서 G·|x|^{dim-2} 의 최솟값 c1, 최댓값 c2를 적합합니다.

    Args:
        green: 3차원 그린 함수
        annulus: (r_in, r_out), 4h ≤ r_in < r_out ≤ M/2
        ratio_bound: c2/c1 상한 (기본 1.5·Λ/λ)

    Raises:
        UnsupportedDimensionError: 2차원
        PreconditionError: 고리 범위가 격자에 맞지 않음
    """
    grid = green.grid
    if grid.dim != 3:
        raise UnsupportedDimensionError("|x|^{2-n} 하한/상한 검사는 3차원에서만 지원합니다")
    r_in, r_out = float(annulus[0]), float(annulus[1])
    if not (4 * grid.h <= r_in + 1e-12 and r_in < r_out <= 0.5 * grid.M + 1e-12):
        raise PreconditionError(f"고리 [{r_in:g}, {r_out:g}] 는 4h ≤ r_in < r_out ≤ M/2 를 만족해야 합니다")

    if ratio_bound is None:
        coeff = green.op.coefficients
        ratio_bound = 1.5 * coeff.Lam / coeff.lam

    dist = green.distance()
    mask = (dist >= r_in) & (dist <= r_out)
    scaled = green.values[mask] * dist[mask]
    report = BoundReport(c1=float(scaled.min()), c2=float(scaled.max()), annulus=(r_in, r_out),
                         ratio_bound=float(ratio_bound), samples=int(mask.sum()))
    logger.debug(f"그린 함수 경계 적합: c1={report.c1:.4g}, c2={report.c2:.4g}, 비={report.ratio:.3f}")
    return report
