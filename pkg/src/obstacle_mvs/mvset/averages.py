"""
평균값 집합 위의 평균과 단조 평균 검사

부해(L v ≥ 0, 즉 A v ≤ 0)에 대해 v(x0) ≤ avg(D_{R1}) ≤ ... ≤ avg(D_{Rk}), 우해는 반대 순서입니다.

단순 평균 사슬은 이산 집합 경계 오차 때문에 여유 3·h·Lip(v) 안에서 비교합니다. 함께 계산하는 가중 평균
μ_R(u) = Σ m_R u (m_R = e_{x0} - h^d A v_R) 은 이산 항등식 μ_R(u) = u(x0) - h^d <v_R, A u> 를 만족하므로,
v_R 이 R 에 대해 증가하는 한 여유 없이 단조입니다.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from scipy import ndimage

from .sets import MeanValueSet
from ..errors import EmptySetError, GridMismatchError, NotSubsolutionError, PreconditionError
from ..config.logger import logger

SLACK_FACTOR = 3.0
CHECK_RTOL = 1e-8
WEIGHTED_RTOL = 1e-6
POLE_GAP_CELLS = 3


def average_over(v: np.ndarray, mvs: MeanValueSet) -> float:
    """셀 측도 가중 평균 (1/|D|)∫_D v"""
    v = np.asarray(v, dtype=float)
    if v.shape != mvs.grid.shape:
        raise GridMismatchError(f"필드 모양 {v.shape} 이 격자 {mvs.grid.shape} 와 다릅니다")
    if mvs.count == 0:
        raise EmptySetError("빈 집합 위에서는 평균을 낼 수 없습니다")
    return float(v[mvs.indicator].mean())


def mean_value_weights(mvs: MeanValueSet) -> np.ndarray:
    """
    이산 평균값 측도 m_R = e_{x0} - h^d A v_R (내부 노드, 경계는 0)

    집합 위에서는 h^d q, 집합을 둘러싼 접촉 띠에서는 -h^d (A v_R) ≥ 0 이고 총합은 1 입니다 (M-행렬).

    Raises:
        PreconditionError: 비접촉 필드 v 가 없는 집합
    """
    if mvs.v is None:
        raise PreconditionError(f"R={mvs.R:g} 집합에 비접촉 필드 v 가 없습니다")
    grid = mvs.grid
    weights = -grid.cell_measure * mvs.op.apply(mvs.v)
    weights[mvs.x0] += 1.0
    weights[~grid.interior_mask] = 0.0
    return weights


def weighted_average(u: np.ndarray, mvs: MeanValueSet) -> float:
    """μ_R(u) = Σ m_R u"""
    u = np.asarray(u, dtype=float)
    if u.shape != mvs.grid.shape:
        raise GridMismatchError(f"필드 모양 {u.shape} 이 격자 {mvs.grid.shape} 와 다릅니다")
    return float(np.sum(mean_value_weights(mvs) * u))


@dataclass
class AverageCurve:
    radii: List[float]
    measures: List[float]
    averages: List[float]
    center_value: float
    weighted: List[float] = field(default_factory=list)

    def rows(self) -> List[List[float]]:
        """(R, |D_R|, 평균[, 가중 평균]) 행"""
        if self.weighted:
            return [[r, m, a, w] for r, m, a, w in zip(self.radii, self.measures, self.averages, self.weighted)]
        return [[r, m, a] for r, m, a in zip(self.radii, self.measures, self.averages)]

    def to_dict(self) -> Dict[str, Any]:
        return {"radii": self.radii, "measures": self.measures, "averages": self.averages,
                "weighted": self.weighted, "center_value": self.center_value}


@dataclass
class MonotoneAverageReport:
    kind: str
    curve: AverageCurve
    slack: float
    lipschitz: float
    violations: List[Dict[str, Any]] = field(default_factory=list)
    weighted_tolerance: float = 0.0
    weighted_violations: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations and not self.weighted_violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "curve": self.curve.to_dict(),
            "slack": self.slack,
            "lipschitz": self.lipschitz,
            "violations": self.violations,
            "weighted_tolerance": self.weighted_tolerance,
            "weighted_violations": self.weighted_violations,
            "passed": self.passed,
        }


def averaging_region(sets: Sequence[MeanValueSet]) -> np.ndarray:
    """가장 큰 집합을 한 셀 팽창한 내부 영역"""
    largest = max(sets, key=lambda s: s.count)
    structure = np.ones((3,) * largest.grid.dim, dtype=bool)
    return ndimage.binary_dilation(largest.indicator, structure=structure) & largest.grid.interior_mask


def lipschitz_estimate(v: np.ndarray, region: np.ndarray, h: float) -> float:
    """영역 안 면 차분의 최댓값 / h"""
    best = 0.0
    for axis in range(v.ndim):
        diff = np.abs(np.diff(v, axis=axis))
        lo = [slice(None)] * v.ndim
        hi = [slice(None)] * v.ndim
        lo[axis] = slice(None, -1)
        hi[axis] = slice(1, None)
        mask = region[tuple(lo)] | region[tuple(hi)]
        if mask.any():
            best = max(best, float(diff[mask].max()))
    return best / h


def chain_violations(chain: Sequence[float], labels: Sequence[str], kind: str,
                     slack: float) -> List[Dict[str, Any]]:
    """
    인접 항의 순서 위반 목록

    sub 는 비감소, super 는 비증가 사슬이어야 하며 slack 이하의 역행은 허용합니다.
    """
    sign = 1.0 if kind == "sub" else -1.0
    found = []
    for k in range(1, len(chain)):
        drop = sign * (chain[k - 1] - chain[k])
        if drop > slack:
            found.append({"from": labels[k - 1], "to": labels[k], "excess": float(drop - slack)})
    return found


def verify_solution_kind(v: np.ndarray, kind: str, sets: Sequence[MeanValueSet]) -> None:
    """
    이산 부해/우해 조건을 확인합니다: sub → (A v) ≤ 0, super → (A v) ≥ 0.

    Raises:
        NotSubsolutionError: 조건 위반 (최악 노드 포함)
    """
    op = sets[0].op
    h = op.grid.h
    Av = op.apply(v)
    region = averaging_region(sets)
    tol = CHECK_RTOL * max(1.0, float(np.abs(v).max())) / h ** 2
    signed = Av if kind == "sub" else -Av
    masked = np.where(region, signed, -np.inf)
    worst = np.unravel_index(int(np.argmax(masked)), masked.shape)
    if masked[worst] > tol:
        raise NotSubsolutionError(
            f"입력이 이산 {'부해' if kind == 'sub' else '우해'}가 아닙니다: 노드 {worst}, (A v) = {Av[worst]:.3e}",
            tuple(int(i) for i in worst), float(Av[worst]),
        )


def pole_outside(sets: Sequence[MeanValueSet]) -> Tuple[int, ...]:
    """
    모든 집합 밖의 극점 노드 y0

    첫 번째 축 위에서 |y0 - x0| ≥ max(r_out + 3h, (r_out + M)/2) 인 가장 가까운 노드입니다. 평균 영역과는
    두 셀 이상 떨어지므로 Lip(v) 에 극점 근방이 들어가지 않습니다.

    Raises:
        PreconditionError: 상자가 좁아 경계에서 두 셀 이상 떨어진 자리가 없음
    """
    if not sets:
        raise PreconditionError("집합 목록이 비었습니다")
    grid = sets[0].grid
    h = grid.h
    r_out = max(s.r_out for s in sets)
    distance = max(r_out + POLE_GAP_CELLS * h, 0.5 * (r_out + grid.M))
    cells = int(np.ceil(distance / h - 1e-9))
    center = grid.center_index
    if center[0] + cells > grid.n - 3:
        raise PreconditionError(
            f"r_out={r_out:.4g} 인 집합 밖에 극점을 둘 자리가 없습니다 (M={grid.M:g}, h={h:g})")
    return (center[0] + cells,) + tuple(center[1:])


def monotone_average_check(v: np.ndarray, kind: str, sets: Sequence[MeanValueSet]) -> MonotoneAverageReport:
    """
    R 오름차순 집합 목록 위에서 평균의 단조성을 확인합니다.

    단순 평균은 여유 3·h·Lip(v) 안에서, 가중 평균 μ_R 은 반올림 허용치 안에서 비교합니다.
    집합에 비접촉 필드가 없으면 가중 사슬은 건너뜁니다.

    Args:
        v: 격자 필드
        kind: "sub" 또는 "super"
        sets: 같은 작용소에서 추출한 평균값 집합 (R 오름차순)

    Raises:
        PreconditionError: 잘못된 kind 또는 빈 목록
        NotSubsolutionError: 입력이 부해/우해 조건을 만족하지 않음
    """
    if kind not in ("sub", "super"):
        raise PreconditionError(f"kind 는 'sub' 또는 'super' 여야 합니다: {kind}")
    if not sets:
        raise PreconditionError("집합 목록이 비었습니다")
    ordered = sorted(sets, key=lambda s: s.R)
    for other in ordered[1:]:
        if not ordered[0].grid.same_as(other.grid):
            raise GridMismatchError("서로 다른 격자의 집합은 비교할 수 없습니다")

    v = np.asarray(v, dtype=float)
    verify_solution_kind(v, kind, ordered)

    grid = ordered[0].grid
    lip = lipschitz_estimate(v, averaging_region(ordered), grid.h)
    slack = SLACK_FACTOR * grid.h * lip
    curve = AverageCurve(radii=[s.R for s in ordered], measures=[s.measure for s in ordered],
                         averages=[average_over(v, s) for s in ordered], center_value=float(v[grid.center_index]))
    labels = ["x0"] + [f"R={r:g}" for r in curve.radii]

    report = MonotoneAverageReport(kind=kind, curve=curve, slack=slack, lipschitz=lip)
    report.violations = chain_violations([curve.center_value] + curve.averages, labels, kind, slack)

    if all(s.v is not None for s in ordered):
        curve.weighted = [weighted_average(v, s) for s in ordered]
        report.weighted_tolerance = WEIGHTED_RTOL * max(1.0, float(np.abs(v).max()))
        report.weighted_violations = chain_violations([curve.center_value] + curve.weighted, labels, kind,
                                                      report.weighted_tolerance)

    if not report.passed:
        logger.warning(f"단조 평균 위반 ({kind}): 단순 {len(report.violations)}건, "
                       f"가중 {len(report.weighted_violations)}건")
    return report
