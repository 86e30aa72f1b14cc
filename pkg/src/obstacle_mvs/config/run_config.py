"""
실행 설정 (RunConfig)

JSON 파일 또는 프리셋에서 읽어 기본값 위에 병합한 뒤 pydantic 모델로 검증합니다.
"""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .presets import DEFAULT_CONFIG, get_preset, merge_config
from .logger import logger, run_journal
from ..discretization.coefficients import COEFFICIENT_KINDS
from ..discretization.grid import build_grid
from ..errors import ConfigError
from ..utils.version_manager import VersionManager

MIN_TOL = 1e-10


class _Block(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GridConfig(_Block):
    dim: Literal[2, 3] = 2
    M: float = Field(2.0, gt=0)
    h: float = Field(1 / 32, gt=0)

    @model_validator(mode="after")
    def _check_sizing(self) -> "GridConfig":
        # SizingError 는 ValueError 이므로 ValidationError 로 감싸집니다
        build_grid(self.dim, self.M, self.h)
        return self


class CoefficientConfig(_Block):
    kind: str = "constant"
    params: Dict[str, float] = Field(default_factory=dict)
    seed: Optional[int] = None

    @field_validator("kind")
    @classmethod
    def _known_kind(cls, value: str) -> str:
        if value not in COEFFICIENT_KINDS:
            raise ValueError(f"알 수 없는 계수장 종류입니다: {value} (지원: {', '.join(COEFFICIENT_KINDS)})")
        return value


class ProblemConfig(_Block):
    radii: List[float] = Field(default_factory=lambda: [0.25, 0.5], min_length=1)
    offset: Optional[List[float]] = None
    route: Literal["lcp", "semilinear", "variational"] = "lcp"
    lcp_method: Literal["psor", "active_set"] = "active_set"
    tol: float = Field(1e-8, ge=MIN_TOL)
    s: float = Field(1e-3, gt=0, le=1)
    epsilon: float = Field(1e-3, gt=0)
    omega: float = Field(1.7, gt=0, lt=2)

    @field_validator("radii")
    @classmethod
    def _positive_sorted(cls, value: List[float]) -> List[float]:
        if any(r <= 0 for r in value):
            raise ValueError(f"R 은 모두 양수여야 합니다: {value}")
        if len(set(value)) != len(value):
            raise ValueError(f"R 목록에 중복이 있습니다: {value}")
        return sorted(value)


class SuitesConfig(_Block):
    nesting: bool = False
    volume: bool = False
    inclusions: bool = False
    truncation: bool = False
    monotone_average: bool = False
    growth: bool = False
    fb_measure: bool = False
    convergence: bool = False
    comparison: bool = False
    penalty_orderings: bool = False
    cross_solver: bool = False

    def enabled(self) -> List[str]:
        """활성 스위트 이름 (선언 순서)"""
        return [name for name, on in self.model_dump().items() if on]


class OutputConfig(_Block):
    directory: str = "out"
    formats: List[Literal["csv", "json", "svg"]] = Field(default_factory=lambda: ["csv", "json", "svg"])


class RunConfig(_Block):
    """검증된 실행 설정"""
    schema_version: str = "1.0"
    name: str = "custom"
    seed: int = Field(0, ge=0)
    grid: GridConfig = Field(default_factory=GridConfig)
    coefficients: CoefficientConfig = Field(default_factory=CoefficientConfig)
    problem: ProblemConfig = Field(default_factory=ProblemConfig)
    suites: SuitesConfig = Field(default_factory=SuitesConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    @field_validator("schema_version")
    @classmethod
    def _schema(cls, value: str) -> str:
        VersionManager.check_schema(value)
        return value

    @model_validator(mode="after")
    def _cross_checks(self) -> "RunConfig":
        M, h = self.grid.M, self.grid.h
        r_max = max(self.problem.radii)
        if r_max > M / 4 * (1 + 1e-12):
            raise ValueError(f"R_max ≤ M/4 이어야 합니다: R_max={r_max:g}, M={M:g}")
        if self.problem.offset is not None and len(self.problem.offset) != self.grid.dim:
            raise ValueError(f"offset 길이({len(self.problem.offset)})가 dim({self.grid.dim})과 다릅니다")
        if self.suites.fb_measure or self.suites.convergence:
            # 거친 해상도 h·2, h·4 도 유효한 격자여야 합니다
            for factor in (2, 4):
                build_grid(self.grid.dim, M, h * factor)
        return self

    @property
    def radii(self) -> List[float]:
        return self.problem.radii

    def canonical_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"), ensure_ascii=False)

    def config_hash(self) -> str:
        """정규 JSON 의 SHA-256"""
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()


def _validate(data: Dict[str, Any], source: str) -> RunConfig:
    try:
        config = RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"설정 검증 실패 ({source}):\n{e}") from e
    except ConfigError:
        raise
    run_journal.log_config(config.name, config.config_hash(), source)
    logger.debug(f"설정 로드: {config.name} ({source})")
    return config


def load_config(path: Union[str, Path]) -> RunConfig:
    """
    JSON 설정 파일을 기본값 위에 병합해 읽습니다. "preset" 키가 있으면 그 프리셋 위에 병합합니다.

    Raises:
        ConfigError: 파일 없음, JSON 오류, 검증 실패
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"설정 파일이 없습니다: {path}")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            stored = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"설정 파일 JSON 오류: {path}: {e}") from e
    if not isinstance(stored, dict):
        raise ConfigError(f"설정 파일 최상위는 객체여야 합니다: {path}")

    preset = stored.pop("preset", None)
    base = get_preset(preset) if preset else DEFAULT_CONFIG
    return _validate(merge_config(base, stored), str(path))


def preset_config(name: str, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """프리셋(+ 선택적 덮어쓰기)에서 설정 생성"""
    return _validate(merge_config(get_preset(name), overrides or {}), f"preset:{name}")


def config_from_dict(data: Dict[str, Any]) -> RunConfig:
    """기본값 위에 병합한 사전에서 설정 생성"""
    return _validate(merge_config(DEFAULT_CONFIG, data), "dict")
