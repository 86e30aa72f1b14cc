"""
상자 격자, 계수장, 유한체적 조립
"""

from .grid import Grid, build_grid
from .coefficients import CoefficientField, make_coefficients, check_ellipticity
from .assembly import DiscreteOperator, assemble

__all__ = ['Grid', 'build_grid', 'CoefficientField', 'make_coefficients', 'check_ellipticity',
           'DiscreteOperator', 'assemble']
