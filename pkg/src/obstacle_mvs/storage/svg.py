"""
2차원 평균값 집합의 SVG 1.1 도면

집합 경계(셀 면), 내접원 r_in, 외접원 r_out, 소스 표시를 물리 좌표의 viewBox 로 그립니다.
"""

import xml.etree.ElementTree as ET
from typing import List

import numpy as np

from ..discretization.grid import Grid
from ..errors import UnsupportedDimensionError

SVG_NS = "http://www.w3.org/2000/svg"
PIXELS = 512
MARGIN = 1.25


def _fmt(value: float) -> str:
    return f"{value:.6f}".rstrip("0").rstrip(".") or "0"


def boundary_segments(indicator: np.ndarray, grid: Grid) -> List[str]:
    """집합 셀과 비집합 셀 사이의 면을 "M x y L x y" 조각으로"""
    h = grid.h
    padded = np.pad(indicator, 1, constant_values=False)
    inner = padded[1:-1, 1:-1]
    segments = []
    for axis in (0, 1):
        for step in (-1, 1):
            neighbor = np.roll(padded, -step, axis=axis)[1:-1, 1:-1]
            faces = np.argwhere(inner & ~neighbor)
            for i, j in faces:
                x, y = grid.axis[i], grid.axis[j]
                if axis == 0:
                    xf = x + step * h / 2
                    a, b = (xf, y - h / 2), (xf, y + h / 2)
                else:
                    yf = y + step * h / 2
                    a, b = (x - h / 2, yf), (x + h / 2, yf)
                segments.append(f"M{_fmt(a[0])} {_fmt(a[1])}L{_fmt(b[0])} {_fmt(b[1])}")
    return sorted(segments)


def render_set_svg(indicator: np.ndarray, grid: Grid, r_in: float, r_out: float, R: float) -> str:
    """
    Raises:
        UnsupportedDimensionError: dim ≠ 2
    """
    if grid.dim != 2:
        raise UnsupportedDimensionError("SVG 내보내기는 2차원만 지원합니다. 3차원은 단면 CSV 를 사용하세요")

    half = max(MARGIN * r_out, 4 * grid.h)
    stroke = grid.h / 4
    ET.register_namespace("", SVG_NS)
    root = ET.Element(f"{{{SVG_NS}}}svg", {
        "version": "1.1",
        "width": str(PIXELS),
        "height": str(PIXELS),
        "viewBox": " ".join(_fmt(v) for v in (-half, -half, 2 * half, 2 * half)),
    })
    ET.SubElement(root, f"{{{SVG_NS}}}title").text = f"D_R, R={R:g}"
    # 수학 좌표계 (y 위쪽)
    group = ET.SubElement(root, f"{{{SVG_NS}}}g", {"transform": "scale(1,-1)"})
    ET.SubElement(group, f"{{{SVG_NS}}}path", {
        "id": "set-boundary",
        "d": "".join(boundary_segments(indicator, grid)),
        "fill": "none",
        "stroke": "#1f4e79",
        "stroke-width": _fmt(stroke),
    })
    for ident, radius, color in (("r-in", r_in, "#2e7d32"), ("r-out", r_out, "#c62828")):
        ET.SubElement(group, f"{{{SVG_NS}}}circle", {
            "id": ident,
            "cx": "0",
            "cy": "0",
            "r": _fmt(radius),
            "fill": "none",
            "stroke": color,
            "stroke-width": _fmt(stroke),
            "stroke-dasharray": f"{_fmt(2 * stroke)} {_fmt(2 * stroke)}",
        })
    ET.SubElement(group, f"{{{SVG_NS}}}circle", {
        "id": "source",
        "cx": "0",
        "cy": "0",
        "r": _fmt(grid.h),
        "fill": "#000000",
    })
    body = ET.tostring(root, encoding="unicode")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + body + "\n"
