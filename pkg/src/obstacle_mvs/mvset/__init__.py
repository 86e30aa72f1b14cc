"""
평균값 집합 추출과 구조 검사
"""

from .sets import MeanValueSet, extract_set, sweep_sets, unit_ball_volume, inner_radius, outer_radius
from .checks import (VolumeReport, InclusionReport, TruncationReport, nesting_check, nesting_violations,
                     volume_identity, ball_inclusions, truncation_check)
from .averages import (AverageCurve, MonotoneAverageReport, average_over, averaging_region, chain_violations,
                       mean_value_weights, monotone_average_check, pole_outside, weighted_average)

__all__ = [
    'MeanValueSet',
    'extract_set',
    'sweep_sets',
    'unit_ball_volume',
    'inner_radius',
    'outer_radius',
    'VolumeReport',
    'InclusionReport',
    'TruncationReport',
    'nesting_check',
    'nesting_violations',
    'volume_identity',
    'ball_inclusions',
    'truncation_check',
    'AverageCurve',
    'MonotoneAverageReport',
    'average_over',
    'averaging_region',
    'chain_violations',
    'mean_value_weights',
    'monotone_average_check',
    'pole_outside',
    'weighted_average',
]
