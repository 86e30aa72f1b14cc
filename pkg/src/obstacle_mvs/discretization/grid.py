"""
상자 [-M, M]^dim 위의 정규 격자

노드는 제어 체적(cell)의 중심이며, 원점 x0 = 0이 항상 노드 위에 놓이도록 2M/h를 짝수 정수로 제한합니다.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Tuple

import numpy as np

from ..errors import SizingError, PreconditionError

_RATIO_TOL = 1e-9


@dataclass(frozen=True)
class Grid:
    """상자 격자 정보 데이터 클래스"""
    dim: int
    M: float
    h: float
    intervals: int = field(repr=False)

    @property
    def n(self) -> int:
        """축당 노드 수"""
        return self.intervals + 1

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.n,) * self.dim

    @property
    def size(self) -> int:
        return self.n ** self.dim

    @property
    def center_index(self) -> Tuple[int, ...]:
        return (self.intervals // 2,) * self.dim

    @property
    def center_flat(self) -> int:
        return int(np.ravel_multi_index(self.center_index, self.shape))

    @property
    def cell_measure(self) -> float:
        return self.h ** self.dim

    @cached_property
    def axis(self) -> np.ndarray:
        """한 축의 노드 좌표"""
        return -self.M + self.h * np.arange(self.n)

    def coordinates(self) -> List[np.ndarray]:
        """축별 좌표 배열 (indexing='ij')"""
        return np.meshgrid(*([self.axis] * self.dim), indexing="ij")

    @cached_property
    def radius(self) -> np.ndarray:
        """원점까지의 거리 |x|"""
        coords = self.coordinates()
        return np.sqrt(sum(c * c for c in coords))

    @cached_property
    def boundary_mask(self) -> np.ndarray:
        """디리클레 경계층 노드"""
        mask = np.zeros(self.shape, dtype=bool)
        for k in range(self.dim):
            index = [slice(None)] * self.dim
            index[k] = 0
            mask[tuple(index)] = True
            index[k] = self.n - 1
            mask[tuple(index)] = True
        return mask

    @property
    def interior_mask(self) -> np.ndarray:
        return ~self.boundary_mask

    def node_position(self, index: Tuple[int, ...]) -> np.ndarray:
        return -self.M + self.h * np.asarray(index, dtype=float)

    def index_of(self, position: np.ndarray) -> Tuple[int, ...]:
        """좌표에 가장 가까운 노드 인덱스"""
        idx = np.rint((np.asarray(position, dtype=float) + self.M) / self.h).astype(int)
        if np.any(idx < 0) or np.any(idx >= self.n):
            raise PreconditionError(f"좌표 {position}가 상자 밖에 있습니다")
        return tuple(int(i) for i in idx)

    def same_as(self, other: "Grid") -> bool:
        return (self.dim == other.dim and self.intervals == other.intervals
                and abs(self.M - other.M) <= _RATIO_TOL * self.M and abs(self.h - other.h) <= _RATIO_TOL * self.h)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "M": self.M,
            "h": self.h,
            "nodes_per_axis": self.n,
            "center_index": list(self.center_index),
        }


def build_grid(dim: int, M: float, h: float) -> Grid:
    """
    격자를 생성합니다.

    Args:
        dim: 공간 차원 (2 또는 3)
        M: 상자 반폭
        h: 격자 간격

    Returns:
        (2M/h + 1)^dim 노드를 가진 Grid

    Raises:
        SizingError: 2M/h가 8 이상의 짝수 정수가 아님
    """
    if dim not in (2, 3):
        raise SizingError(f"지원하지 않는 차원입니다: {dim}")
    if M <= 0 or h <= 0:
        raise SizingError(f"M과 h는 양수여야 합니다: M={M}, h={h}")

    ratio = 2.0 * M / h
    intervals = int(round(ratio))
    if abs(ratio - intervals) > _RATIO_TOL * max(1.0, ratio):
        raise SizingError(f"2M/h = {ratio:.6g} 가 정수가 아닙니다")
    if intervals % 2 != 0:
        raise SizingError(f"2M/h = {intervals} 가 짝수가 아닙니다")
    if intervals < 8:
        raise SizingError(f"2M/h = {intervals} 는 8 이상이어야 합니다")

    return Grid(dim=dim, M=float(M), h=float(h), intervals=intervals)
