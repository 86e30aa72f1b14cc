"""
산출물 저장소 모듈

실행 산출물(해, 집합, 곡선, 매니페스트, 보고서, SVG)을 출력 디렉토리에 원자적으로 기록합니다.
"""

from .file_manager import OutputManager
from .artifacts import ArtifactStore, csv_text, dumps
from .svg import render_set_svg, boundary_segments

__all__ = [
    'OutputManager',
    'ArtifactStore',
    'csv_text',
    'dumps',
    'render_set_svg',
    'boundary_segments',
]
