"""
기본 제공 실행 설정 (프리셋)

laplace2d / laplace3d 는 a ≡ I, checkerboard2d 는 α=1, β=10, random2d 는 λ=1, Λ=5 의 무작위 블록 계수입니다.
R_max ≤ M/4 를 지키도록 상자 크기를 잡았습니다.
"""

import copy
from typing import Any, Dict

from ..errors import ConfigError

_ALL_SUITES = {
    "nesting": True,
    "volume": True,
    "inclusions": True,
    "truncation": True,
    "monotone_average": True,
    "growth": True,
    "fb_measure": True,
    "convergence": True,
    "comparison": True,
    "penalty_orderings": True,
    "cross_solver": True,
}

_LAPLACE3D_SUITES = ("nesting", "volume", "monotone_average", "growth", "fb_measure", "cross_solver")

DEFAULT_CONFIG: Dict[str, Any] = {
    "schema_version": "1.0",
    "name": "custom",
    "seed": 0,
    "grid": {"dim": 2, "M": 2.0, "h": 1 / 32},
    "coefficients": {"kind": "constant", "params": {}, "seed": None},
    "problem": {
        "radii": [0.25, 0.5],
        "offset": None,
        "route": "lcp",
        "lcp_method": "active_set",
        "tol": 1e-8,
        "s": 1e-3,
        "epsilon": 1e-3,
        "omega": 1.7,
    },
    "suites": {name: False for name in _ALL_SUITES},
    "output": {"directory": "out", "formats": ["csv", "json", "svg"]},
}

PRESETS: Dict[str, Dict[str, Any]] = {
    "laplace2d": {
        "name": "laplace2d",
        "grid": {"dim": 2, "M": 4.0, "h": 1 / 64},
        "coefficients": {"kind": "constant", "params": {"scale": 1.0}},
        "problem": {"radii": [0.25, 0.5, 1.0]},
        "suites": dict(_ALL_SUITES),
    },
    "laplace3d": {
        "name": "laplace3d",
        "grid": {"dim": 3, "M": 2.0, "h": 1 / 32},
        "coefficients": {"kind": "constant", "params": {"scale": 1.0}},
        "problem": {"radii": [0.375, 0.4375, 0.5]},
        # inclusions 는 2배 R 범위, truncation 과 convergence 는 더 큰 격자가 필요합니다
        "suites": {name: name in _LAPLACE3D_SUITES for name in _ALL_SUITES},
        "output": {"formats": ["csv", "json"]},
    },
    "checkerboard2d": {
        "name": "checkerboard2d",
        "grid": {"dim": 2, "M": 4.0, "h": 1 / 64},
        "coefficients": {"kind": "checkerboard", "params": {"alpha": 1.0, "beta": 10.0, "block": 0.5}},
        "problem": {"radii": [0.5, 1.0]},
        "suites": dict(_ALL_SUITES),
    },
    "random2d": {
        "name": "random2d",
        "seed": 7,
        "grid": {"dim": 2, "M": 4.0, "h": 1 / 64},
        "coefficients": {"kind": "random_piecewise",
                         "params": {"lambda": 1.0, "Lambda": 5.0, "block": 0.5, "max_angle": 0.1}},
        "problem": {"radii": [0.5, 1.0]},
        "suites": dict(_ALL_SUITES),
    },
}


def merge_config(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """블록 단위 병합 (override 의 키가 우선)"""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_config(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def get_preset(name: str) -> Dict[str, Any]:
    """
    기본값 위에 병합한 프리셋 설정 사전

    Raises:
        ConfigError: 없는 프리셋
    """
    if name not in PRESETS:
        raise ConfigError(f"알 수 없는 프리셋입니다: {name} (사용 가능: {', '.join(sorted(PRESETS))})")
    return merge_config(DEFAULT_CONFIG, PRESETS[name])
