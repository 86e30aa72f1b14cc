"""
해의 구조(이차 성장, 자유 경계 측도)와 이산화 수렴 검사
"""

from .growth import (SLOPE_RANGE, GrowthReport, ball_sup, free_boundary_nodes, growth_profile, growth_radii,
                     quadratic_growth_check)
from .fb_measure import FBMeasureReport, fb_measure_decay
from .convergence import ConvergenceReport, convergence_study, restrict_to_coarse

__all__ = ['SLOPE_RANGE', 'GrowthReport', 'ball_sup', 'free_boundary_nodes', 'growth_profile', 'growth_radii',
           'quadratic_growth_check', 'FBMeasureReport', 'fb_measure_decay', 'ConvergenceReport',
           'convergence_study', 'restrict_to_coarse']
