"""
이산 그린 함수
"""

from .green import (GreensFunction, CappedGreen, BoundReport, solve_green, cap_levels, cap_green,
                    spherical_means, check_lsw_bounds)

__all__ = ['GreensFunction', 'CappedGreen', 'BoundReport', 'solve_green', 'cap_levels', 'cap_green',
           'spherical_means', 'check_lsw_bounds']
