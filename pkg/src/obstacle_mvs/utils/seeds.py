"""
단일 설정 시드에서 이름 붙은 난수 스트림 파생

규칙: SeedSequence(seed, spawn_key=(crc32(name),))
"""

import zlib
from typing import Dict, Iterable

import numpy as np

SPLIT_RULE = "numpy.random.SeedSequence(seed, spawn_key=(crc32(utf8(name)),))"


def stream_sequence(seed: int, name: str) -> np.random.SeedSequence:
    return np.random.SeedSequence(int(seed), spawn_key=(zlib.crc32(name.encode("utf-8")),))


def stream(seed: int, name: str) -> np.random.Generator:
    """이름 붙은 스트림의 난수 생성기"""
    return np.random.default_rng(stream_sequence(seed, name))


def stream_seed(seed: int, name: str) -> int:
    """정수 시드가 필요한 곳(계수장 서술자 등)에 쓰는 32비트 파생 시드"""
    return int(stream_sequence(seed, name).generate_state(1)[0])


def describe_streams(seed: int, names: Iterable[str]) -> Dict[str, object]:
    """매니페스트용 스트림 기록"""
    return {
        "root_seed": int(seed),
        "rule": SPLIT_RULE,
        "streams": {name: stream_seed(seed, name) for name in sorted(names)},
    }
