"""
반선형 해 w_s 사이의 기본 비교 (노드별)

  1. s > 0        → w_s ≥ 0
  2. s < 0        → w_s ≥ s
  3. s1 < s0      → w_{s1} ≤ w_{s0}      (Φ_s 는 s 에 대해 비증가)
  4. t < 0 < s    → w_s ≤ w_t + s - t
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np

from .general import GeneralObstacleProblem, solve_general_gap
from .penalty import PenaltyProfile
from ..errors import PreconditionError
from ..config.logger import logger

SOLVE_TOL = 1e-12


@dataclass
class ComparisonItem:
    item: int
    statement: str
    passed: bool
    violation: float
    worst_node: Tuple[int, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "item": self.item,
            "statement": self.statement,
            "passed": self.passed,
            "violation": self.violation,
            "worst_node": list(self.worst_node),
        }


@dataclass
class ComparisonReport:
    s0: float
    s1: float
    tol: float
    items: List[ComparisonItem] = field(default_factory=list)
    spread: float = 0.0

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "s0": self.s0,
            "s1": self.s1,
            "tol": self.tol,
            "passed": self.passed,
            "max_pairwise_difference": self.spread,
            "items": [item.to_dict() for item in self.items],
        }


def _check(item: int, statement: str, excess: np.ndarray, tol: float) -> ComparisonItem:
    """excess ≤ 0 이어야 하는 필드에서 최악 노드를 찾습니다."""
    worst = np.unravel_index(int(np.argmax(excess)), excess.shape)
    violation = float(excess[worst])
    return ComparisonItem(item=item, statement=statement, passed=violation <= tol, violation=violation,
                          worst_node=tuple(int(i) for i in worst))


def comparison_suite(problem: GeneralObstacleProblem, s0: float = 1.0, s1: float = 0.5,
                     tol: float = 1e-8) -> ComparisonReport:
    """
    s ∈ {-s0, s0, s1} 해를 구하고 네 가지 비교를 노드별로 확인합니다.

    3번은 w_{s1} ≤ w_{s0} 입니다. 폭이 좁을수록 Φ_s 가 커지므로 해가 작아집니다.

    Args:
        problem: 일반 틈 문제
        s0, s1: 0 < s1 < s0 ≤ 1
        tol: 노드별 허용 오차
    """
    if not 0.0 < s1 < s0 <= 1.0:
        raise PreconditionError(f"0 < s1 < s0 ≤ 1 이어야 합니다: s0={s0}, s1={s1}")

    w_pos = solve_general_gap(problem, PenaltyProfile(s0), tol=SOLVE_TOL).w
    w_neg = solve_general_gap(problem, PenaltyProfile(-s0), tol=SOLVE_TOL).w
    w_small = solve_general_gap(problem, PenaltyProfile(s1), tol=SOLVE_TOL).w

    report = ComparisonReport(s0=s0, s1=s1, tol=tol)
    report.items = [
        _check(1, f"w_{{{s0:g}}} ≥ 0", -w_pos, tol),
        _check(2, f"w_{{-{s0:g}}} ≥ -{s0:g}", -s0 - w_neg, tol),
        _check(3, f"w_{{{s1:g}}} ≤ w_{{{s0:g}}}", w_small - w_pos, tol),
        _check(4, f"w_{{{s0:g}}} ≤ w_{{-{s0:g}}} + {2 * s0:g}", w_pos - w_neg - 2 * s0, tol),
    ]
    stack = np.stack([w_pos, w_neg, w_small])
    report.spread = float((stack.max(axis=0) - stack.min(axis=0)).max())

    for item in report.items:
        if not item.passed:
            logger.warning(f"비교 {item.item} 위반: {item.statement}, 노드 {item.worst_node}, 크기 {item.violation:.3e}")
    return report
