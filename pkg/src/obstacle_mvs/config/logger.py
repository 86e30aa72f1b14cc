"""
로깅 설정

파일 로그는 날짜별 회전 파일, 콘솔 로그는 rich 로 출력합니다.
로그 디렉토리와 콘솔 수준은 환경 변수(.env 포함)로 바꿀 수 있습니다.
"""
import logging
import logging.handlers
import os
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from rich.logging import RichHandler

load_dotenv()

MAX_LOG_BYTES = 10 * 1024 * 1024
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def get_log_dir() -> Path:
    """OBSTACLE_MVS_LOG_DIR, 없으면 ~/.obstacle_mvs/logs"""
    override = os.environ.get("OBSTACLE_MVS_LOG_DIR")
    return Path(override) if override else Path.home() / ".obstacle_mvs" / "logs"


def _rotating_handler(prefix: str, level: int, fmt: str, backups: int) -> logging.Handler:
    log_dir = get_log_dir()
    log_dir.mkdir(parents=True, exist_ok=True)
    path = log_dir / f"{prefix}_{datetime.now().strftime('%Y%m%d')}.log"

    handler = logging.handlers.RotatingFileHandler(path, maxBytes=MAX_LOG_BYTES, backupCount=backups,
                                                   encoding='utf-8')
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(fmt, datefmt=DATE_FORMAT))
    return handler


class LoggerSetup:
    """패키지 로거 설정"""

    @staticmethod
    def setup_logger(name: str = "obstacle_mvs") -> logging.Logger:
        """
        파일(DEBUG 이상)과 콘솔(OBSTACLE_MVS_LOG_LEVEL, 기본 INFO) 핸들러를 붙인 로거

        이미 핸들러가 있으면 그대로 돌려줍니다.
        """
        logger = logging.getLogger(name)
        if logger.handlers:
            return logger

        logger.setLevel(logging.DEBUG)
        logger.addHandler(_rotating_handler(
            name, logging.DEBUG,
            '%(asctime)s - %(name)s - %(levelname)s - [%(filename)s:%(lineno)d] - %(message)s',
            backups=5,
        ))

        level_name = os.environ.get("OBSTACLE_MVS_LOG_LEVEL", "INFO").upper()
        console = RichHandler(show_path=False, rich_tracebacks=False)
        console.setLevel(getattr(logging, level_name, logging.INFO))
        console.setFormatter(logging.Formatter('%(message)s'))
        logger.addHandler(console)

        logger.propagate = False
        return logger


class RunJournal:
    """실행 이벤트(설정, 풀이, 검증 스위트, 내보내기) 기록 전용 로거"""

    def __init__(self, name: str = "obstacle_mvs.runs"):
        self.logger = logging.getLogger(name)
        if self.logger.handlers:
            return

        self.logger.setLevel(logging.INFO)
        # 실행 기록은 더 많이 보관
        self.logger.addHandler(_rotating_handler("runs", logging.INFO, '%(asctime)s - %(message)s', backups=10))
        self.logger.propagate = False

    def log_config(self, name: str, config_hash: str, source: str):
        self.logger.info(f"CONFIG: {name} (hash={config_hash[:12]}, source={source})")

    def log_solve(self, R: float, solver_tag: str, converged: bool, iterations: int,
                  residual: float, seconds: Optional[float] = None):
        """장애물 문제 풀이 한 건"""
        status = "수렴" if converged else "미수렴"
        msg = f"SOLVE: R={R:g} - {solver_tag} {status}, 반복={iterations}, 잔차={residual:.3e}"
        if seconds is not None:
            msg += f", 소요={seconds:.2f}초"
        self.logger.info(msg)

    def log_suite(self, suite: str, passed: bool, details: Optional[Dict[str, Any]] = None):
        status = "통과" if passed else "실패"
        extra = "".join(f"\n  {key}: {value}" for key, value in (details or {}).items())
        self.logger.info(f"SUITE: {suite} - {status}{extra}")

    def log_export(self, kind: str, path: str):
        self.logger.info(f"EXPORT: {kind} → {path}")


logger = LoggerSetup.setup_logger()
run_journal = RunJournal()
