"""
계수장 a^{ij}(x) 생성

constant, checkerboard, random_piecewise 세 종류를 지원합니다. 계수장은 서술자(kind, params, seed)만
보관하고, 격자 위의 값은 sample()에서 필요할 때 계산합니다. 따라서 같은 서술자는 어떤 격자에서도
재현 가능한 값을 돌려줍니다.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

import numpy as np
from scipy.spatial.transform import Rotation

from .grid import Grid
from ..errors import EllipticityError, PreconditionError
from ..config.logger import logger

COEFFICIENT_KINDS = ("constant", "checkerboard", "random_piecewise")

# 블록 인덱스를 음이 아닌 엔트로피로 옮기기 위한 오프셋
_BLOCK_OFFSET = 1 << 20
_ELLIPTICITY_RTOL = 1e-12


@dataclass(frozen=True)
class CoefficientField:
    """대칭 균등 타원 계수장 서술자"""
    kind: str
    params: Dict[str, float] = field(default_factory=dict)
    seed: int = 0
    lam: float = 1.0
    Lam: float = 1.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "params": dict(sorted(self.params.items())),
            "seed": self.seed,
            "lambda": self.lam,
            "Lambda": self.Lam,
        }

    def sample(self, grid: Grid, offset: Optional[Sequence[float]] = None) -> np.ndarray:
        """
        격자 노드(제어 체적 중심)에서 계수 행렬을 계산합니다.

        Args:
            grid: 대상 격자
            offset: 좌표 평행이동 (x0를 원점으로 옮길 때 사용)

        Returns:
            grid.shape + (dim, dim) 모양의 배열
        """
        dim = grid.dim
        shift = np.zeros(dim) if offset is None else np.asarray(offset, dtype=float)
        if shift.shape != (dim,):
            raise PreconditionError(f"offset 차원이 격자 차원({dim})과 다릅니다")
        coords = [c + shift[k] for k, c in enumerate(grid.coordinates())]
        eye = np.eye(dim)

        # 서로 다른 행렬 표(table)와 노드별 라벨(labels)로 표현
        if self.kind == "constant":
            table = self.params.get("scale", 1.0) * eye[None]
            labels = np.zeros(grid.shape, dtype=np.int64)

        elif self.kind == "checkerboard":
            parity = _block_indices(coords, self.params["block"]).sum(axis=0) % 2
            table = np.stack([self.params["alpha"] * eye, self.params["beta"] * eye])
            labels = parity.astype(np.int64)

        elif self.kind == "random_piecewise":
            blocks = _block_indices(coords, self.params.get("block", 0.5))
            flat = blocks.reshape(dim, -1).T
            unique, inverse = np.unique(flat, axis=0, return_inverse=True)
            table = np.stack([self._block_matrix(dim, tuple(int(b) for b in row)) for row in unique])
            labels = inverse.reshape(grid.shape)

        else:
            raise PreconditionError(f"알 수 없는 계수장 종류입니다: {self.kind}")

        check_ellipticity(table, self.lam, self.Lam)
        return table[labels]

    def _block_matrix(self, dim: int, block: tuple) -> np.ndarray:
        """블록 하나의 대칭 행렬 (스펙트럼은 [λ, Λ] 안)"""
        entropy = [self.seed, dim] + [b + _BLOCK_OFFSET for b in block]
        rng = np.random.default_rng(entropy)
        eigenvalues = rng.uniform(self.lam, self.Lam, size=dim)
        max_angle = self.params.get("max_angle", 0.1)
        if dim == 2:
            theta = rng.uniform(-max_angle, max_angle)
            c, s = np.cos(theta), np.sin(theta)
            rotation = np.array([[c, -s], [s, c]])
        else:
            rotation = Rotation.from_rotvec(rng.uniform(-max_angle, max_angle, size=3)).as_matrix()
        matrix = rotation @ np.diag(eigenvalues) @ rotation.T
        return 0.5 * (matrix + matrix.T)


def _block_indices(coords: Sequence[np.ndarray], block: float) -> np.ndarray:
    if block <= 0:
        raise PreconditionError(f"블록 크기는 양수여야 합니다: {block}")
    return np.stack([np.floor(c / block + 1e-12).astype(np.int64) for c in coords])


def _sample_directions(dim: int) -> np.ndarray:
    """타원성 검사용 단위 방향 표본"""
    if dim == 2:
        angles = np.linspace(0.0, np.pi, 16, endpoint=False)
        return np.stack([np.cos(angles), np.sin(angles)], axis=1)
    # 피보나치 구면 표본
    count = 32
    k = np.arange(count) + 0.5
    polar = np.arccos(1.0 - 2.0 * k / count)
    azimuth = np.pi * (1.0 + 5 ** 0.5) * k
    return np.stack([np.cos(azimuth) * np.sin(polar), np.sin(azimuth) * np.sin(polar), np.cos(polar)], axis=1)


def check_ellipticity(values: np.ndarray, lam: float, Lam: float) -> None:
    """
    대칭성과 λ|ξ|² ≤ a^{ij}ξ_iξ_j ≤ Λ|ξ|²을 유한 방향 표본에서 검사합니다.

    Raises:
        EllipticityError: 조건을 위반하는 셀이 있음
    """
    dim = values.shape[-1]
    asym = np.abs(values - np.swapaxes(values, -1, -2)).max()
    if asym > 0.0:
        raise EllipticityError(f"계수 행렬이 대칭이 아닙니다 (최대 비대칭 {asym:.3e})")

    xi = _sample_directions(dim)
    quad = np.einsum("...ij,ki,kj->...k", values, xi, xi)
    slack = _ELLIPTICITY_RTOL * max(1.0, Lam)
    low, high = quad.min(), quad.max()
    if low < lam - slack or high > Lam + slack:
        raise EllipticityError(
            f"균등 타원성 위반: 이차형식 범위 [{low:.6g}, {high:.6g}] ⊄ [λ={lam:g}, Λ={Lam:g}]"
        )


def make_coefficients(kind: str, params: Optional[Dict[str, float]] = None, seed: int = 0) -> CoefficientField:
    """
    계수장 서술자를 생성합니다.

    Args:
        kind: "constant" | "checkerboard" | "random_piecewise"
        params: constant → scale; checkerboard → alpha, beta, block;
                random_piecewise → lambda, Lambda, block, max_angle
        seed: random_piecewise 재현용 시드

    Raises:
        EllipticityError: λ ≤ 0 또는 Λ < λ
        PreconditionError: 알 수 없는 종류 또는 누락된 매개변수
    """
    params = dict(params or {})

    if kind == "constant":
        scale = float(params.get("scale", 1.0))
        lam, Lam = scale, scale
    elif kind == "checkerboard":
        missing = {"alpha", "beta", "block"} - set(params)
        if missing:
            raise PreconditionError(f"checkerboard 매개변수 누락: {sorted(missing)}")
        lam, Lam = min(params["alpha"], params["beta"]), max(params["alpha"], params["beta"])
    elif kind == "random_piecewise":
        missing = {"lambda", "Lambda"} - set(params)
        if missing:
            raise PreconditionError(f"random_piecewise 매개변수 누락: {sorted(missing)}")
        lam, Lam = float(params["lambda"]), float(params["Lambda"])
        params.setdefault("block", 0.5)
        params.setdefault("max_angle", 0.1)
    else:
        raise PreconditionError(f"알 수 없는 계수장 종류입니다: {kind} (지원: {', '.join(COEFFICIENT_KINDS)})")

    if lam <= 0:
        raise EllipticityError(f"λ는 양수여야 합니다: λ={lam}")
    if Lam < lam:
        raise EllipticityError(f"Λ < λ 입니다: λ={lam}, Λ={Lam}")

    field_ = CoefficientField(kind=kind, params={k: float(v) for k, v in params.items()},
                              seed=int(seed), lam=float(lam), Lam=float(Lam))
    logger.debug(f"계수장 생성: {field_.to_dict()}")
    return field_
