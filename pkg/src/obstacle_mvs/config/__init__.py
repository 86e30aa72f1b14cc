"""
obstacle_mvs 설정 관리 모듈

RunConfig 는 계산 모듈을 참조하므로 obstacle_mvs.config.run_config 에서 직접 가져옵니다.
"""

from .logger import logger, run_journal, LoggerSetup, RunJournal
from .presets import PRESETS, DEFAULT_CONFIG, get_preset, merge_config

__all__ = ['logger', 'run_journal', 'LoggerSetup', 'RunJournal', 'PRESETS', 'DEFAULT_CONFIG', 'get_preset',
           'merge_config']
