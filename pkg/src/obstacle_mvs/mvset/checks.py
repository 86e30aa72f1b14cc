"""
평균값 집합의 구조 검사: 포함 순서, 부피 항등식, 공 포함, 상자 절단 독립성
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

import numpy as np
from scipy import ndimage

from .sets import MeanValueSet, extract_set
from ..obstacle.lcp import solve_lcp
from ..obstacle.problem import ObstacleProblem, rebuild
from ..errors import GridMismatchError, PreconditionError
from ..config.logger import logger

VOLUME_TOLERANCE = 0.05
INCLUSION_TOLERANCE = 0.15


def _same_grid(sets: Sequence[MeanValueSet]) -> None:
    first = sets[0].grid
    for other in sets[1:]:
        if not first.same_as(other.grid):
            raise GridMismatchError("서로 다른 격자의 집합은 비교할 수 없습니다")


def _spread(values: Sequence[float]) -> float:
    values = np.asarray(values, dtype=float)
    return float((values.max() - values.min()) / values.mean())


def nesting_violations(inner: MeanValueSet, outer: MeanValueSet) -> np.ndarray:
    """한 셀 띠를 허용하고도 outer 밖에 있는 inner 노드"""
    _same_grid([inner, outer])
    structure = np.ones((3,) * inner.grid.dim, dtype=bool)
    band = ndimage.binary_dilation(outer.indicator, structure=structure)
    return inner.indicator & ~band


def nesting_check(inner: MeanValueSet, outer: MeanValueSet) -> bool:
    """
    D_R ⊆ D_S (R ≤ S) 를 한 셀 허용 띠로 확인합니다.

    Raises:
        GridMismatchError: 격자가 다름
        PreconditionError: R > S
    """
    _same_grid([inner, outer])
    if inner.R > outer.R:
        raise PreconditionError(f"nesting_check 는 R ≤ S 를 요구합니다: R={inner.R:g}, S={outer.R:g}")
    strict = int(nesting_violations(inner, outer).sum())
    if strict:
        logger.warning(f"포함 순서 위반: D_{inner.R:g} ⊄ D_{outer.R:g} ({strict} 노드)")
    return strict == 0


@dataclass
class VolumeReport:
    radii: List[float]
    kappas: List[float]
    tolerance: float

    @property
    def spread(self) -> float:
        return _spread(self.kappas) if len(self.kappas) > 1 else 0.0

    @property
    def passed(self) -> bool:
        return self.spread <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {"radii": self.radii, "kappa": self.kappas, "spread": self.spread,
                "tolerance": self.tolerance, "passed": self.passed}


def volume_identity(sets: Sequence[MeanValueSet], tolerance: float = VOLUME_TOLERANCE) -> VolumeReport:
    """κ_R = |D_R|·R^{-dim} 가 R 에 대해 일정한지 확인합니다."""
    if sets:
        _same_grid(sets)
    return VolumeReport(radii=[s.R for s in sets], kappas=[s.kappa for s in sets], tolerance=tolerance)


@dataclass
class InclusionReport:
    radii: List[float]
    c_values: List[float]
    C_values: List[float]
    lam: float
    Lam: float
    tolerance: float

    @property
    def c_spread(self) -> float:
        return _spread(self.c_values)

    @property
    def C_spread(self) -> float:
        return _spread(self.C_values)

    @property
    def ordered(self) -> bool:
        return all(0.0 < c <= C < np.inf for c, C in zip(self.c_values, self.C_values))

    @property
    def passed(self) -> bool:
        return self.ordered and self.c_spread <= self.tolerance and self.C_spread <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "radii": self.radii,
            "c_R": self.c_values,
            "C_R": self.C_values,
            "c_spread": self.c_spread,
            "C_spread": self.C_spread,
            "lambda": self.lam,
            "Lambda": self.Lam,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def ball_inclusions(sets: Sequence[MeanValueSet], lam: float, Lam: float,
                    tolerance: float = INCLUSION_TOLERANCE) -> InclusionReport:
    """
    c_R = r_in/R, C_R = r_out/R 가 R 에 대해 안정적인지 확인합니다.

    Raises:
        PreconditionError: 집합이 2개 미만이거나 R 범위가 2배 미만
    """
    if len(sets) < 2:
        raise PreconditionError("공 포함 검사에는 2개 이상의 R 이 필요합니다")
    _same_grid(sets)
    radii = [s.R for s in sets]
    if max(radii) < 2.0 * min(radii) * (1 - 1e-12):
        raise PreconditionError(f"R 범위가 2배 이상이어야 합니다: {radii}")
    return InclusionReport(radii=radii, c_values=[s.r_in / s.R for s in sets],
                           C_values=[s.r_out / s.R for s in sets], lam=lam, Lam=Lam, tolerance=tolerance)


@dataclass
class TruncationReport:
    M1: float
    M2: float
    r_out: float
    guard_radius: float
    indicator_mismatch: int = 0
    max_difference: float = 0.0
    tolerance: float = 0.0
    inconclusive: bool = False
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return (not self.inconclusive and self.indicator_mismatch == 0
                and self.max_difference <= 10.0 * self.tolerance)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "M1": self.M1,
            "M2": self.M2,
            "r_out": self.r_out,
            "guard_radius": self.guard_radius,
            "indicator_mismatch": self.indicator_mismatch,
            "max_difference": self.max_difference,
            "tolerance": self.tolerance,
            "inconclusive": self.inconclusive,
            "passed": self.passed,
            **self.details,
        }


def truncation_check(problem: ObstacleProblem, M1: float, M2: float, tol: float = 1e-8,
                     method: str = "active_set", omega: float = 1.7) -> TruncationReport:
    """
    두 상자 [-M1, M1]^d, [-M2, M2]^d 에서 같은 h 로 풀어 B_{M1/2} 위에서 비교합니다.

    Raises:
        PreconditionError: M2 < M1 + 1
    """
    if M2 < M1 + 1.0 - 1e-12:
        raise PreconditionError(f"M2 ≥ M1 + 1 이어야 합니다: M1={M1:g}, M2={M2:g}")

    small = solve_lcp(rebuild(problem, M=M1), tol=tol, omega=omega, method=method)
    large = solve_lcp(rebuild(problem, M=M2), tol=tol, omega=omega, method=method)
    grid1, grid2 = small.grid, large.grid
    guard = 0.5 * M1

    set1 = extract_set(small)
    report = TruncationReport(M1=M1, M2=M2, r_out=set1.r_out, guard_radius=guard, tolerance=tol)
    if set1.r_out >= guard - grid1.h:
        report.inconclusive = True
        logger.warning(f"비접촉 집합이 B_{guard:g} 경계에 닿습니다 (r_out={set1.r_out:.4g}); 더 큰 M1 이 필요합니다")
        return report

    shift = (grid2.n - grid1.n) // 2
    window = tuple(slice(shift, shift + grid1.n) for _ in range(grid1.dim))
    v2 = large.v[window]
    inside = grid1.radius <= guard
    report.indicator_mismatch = int(np.count_nonzero((small.active_set != large.active_set[window]) & inside))
    report.max_difference = float(np.abs(small.v - v2)[inside].max())
    logger.info(f"절단 독립성: M={M1:g}/{M2:g}, 지시 불일치 {report.indicator_mismatch}, "
                f"최대 차 {report.max_difference:.3e}")
    return report
