"""
obstacle_mvs 유틸리티 모듈
"""

from .version_manager import VersionManager, SCHEMA_VERSION
from .seeds import stream, stream_seed, describe_streams
from .linalg import pcg, solve_spd, amg_preconditioner

__all__ = ['VersionManager', 'SCHEMA_VERSION', 'stream', 'stream_seed', 'describe_streams',
           'pcg', 'solve_spd', 'amg_preconditioner']
