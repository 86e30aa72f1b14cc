"""
전이 함수 Φ_s 와 그 원시함수 Ψ_s

Φ_1(x) = 3x² - 2x³ (0 ≤ x ≤ 1), x < 0 에서 0, x > 1 에서 1.  Φ_s(x) = Φ_1(x/s),
음의 폭은 Φ_{-s}(x) = Φ_s(x + s) 로 정의합니다.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import PreconditionError

PROFILE_SHAPES = ("smoothstep",)


@dataclass(frozen=True)
class PenaltyProfile:
    """부호 있는 전이 폭 s 의 벌점 프로파일"""
    s: float
    shape: str = "smoothstep"

    def __post_init__(self):
        if self.shape not in PROFILE_SHAPES:
            raise PreconditionError(f"지원하지 않는 전이 함수입니다: {self.shape}")
        if not 0.0 < abs(self.s) <= 1.0:
            raise PreconditionError(f"|s| 는 (0, 1] 안에 있어야 합니다: s={self.s}")

    @property
    def width(self) -> float:
        return abs(self.s)

    def _scaled(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.s < 0:
            x = x + self.width
        return x / self.width

    def phi(self, x: np.ndarray) -> np.ndarray:
        t = np.clip(self._scaled(x), 0.0, 1.0)
        return t * t * (3.0 - 2.0 * t)

    def dphi(self, x: np.ndarray) -> np.ndarray:
        t = np.clip(self._scaled(x), 0.0, 1.0)
        return 6.0 * t * (1.0 - t) / self.width

    def psi(self, x: np.ndarray) -> np.ndarray:
        """Ψ(x) = ∫_{-∞}^x Φ (볼록)"""
        t = self._scaled(x)
        inside = np.clip(t, 0.0, 1.0)
        ramp = self.width * inside ** 3 * (1.0 - 0.5 * inside)
        return ramp + self.width * np.maximum(t - 1.0, 0.0)

    def to_dict(self):
        return {"s": self.s, "shape": self.shape}
