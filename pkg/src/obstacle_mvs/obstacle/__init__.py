"""
장애물 문제 풀이 모듈

상보 문제(LCP), 반선형 Φ_s 벌점, 변분 Φ_ε 벌점의 세 경로와 일반 자료의 틈 문제를 제공합니다.
"""

from .problem import ObstacleProblem, ObstacleSolution, make_problem, rebuild, complementarity
from .penalty import PenaltyProfile
from .lcp import solve_lcp
from .semilinear import solve_penalized_semilinear
from .variational import solve_variational_penalty, energy, penalized_energy, unconstrained_bound_check
from .general import GeneralObstacleProblem, GapSolution, make_general_problem, solve_general_gap, gap_report
from .comparison import ComparisonReport, comparison_suite

__all__ = [
    'ObstacleProblem',
    'ObstacleSolution',
    'make_problem',
    'rebuild',
    'complementarity',
    'PenaltyProfile',
    'solve_lcp',
    'solve_penalized_semilinear',
    'solve_variational_penalty',
    'energy',
    'penalized_energy',
    'unconstrained_bound_check',
    'GeneralObstacleProblem',
    'GapSolution',
    'make_general_problem',
    'solve_general_gap',
    'gap_report',
    'ComparisonReport',
    'comparison_suite',
]
