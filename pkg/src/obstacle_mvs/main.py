#!/usr/bin/env python3
"""
obstacle-mvs 명령줄 엔트리포인트

종료 코드: 0 성공, 1 잘못된 입력/설정/산출물 없음, 2 미수렴, 3 스위트 실패, 4 절단 검사 판정 불가
"""

from pathlib import Path
from typing import Callable, Optional

import typer
from rich.console import Console

from .config.logger import logger
from .config.run_config import RunConfig, load_config, preset_config
from .errors import ContinuationError, ObstacleMVSError, SolverStagnationError
from .runner import SweepRunner
from .utils.version_manager import VersionManager

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NONCONVERGENCE = 2
EXIT_SUITE_FAILURE = 3
EXIT_INCONCLUSIVE = 4

app = typer.Typer(add_completion=False, help="장애물 문제로 평균값 집합을 구성하고 구조 정리를 검증합니다.")
console = Console(stderr=True)

ConfigOption = typer.Option(None, "--config", help="JSON 설정 파일 경로")
PresetOption = typer.Option(None, "--preset", help="프리셋 이름 (laplace2d, laplace3d, checkerboard2d, random2d)")
OutOption = typer.Option(None, "--out", help="출력 디렉토리 (기본: 설정의 output.directory)")
JobsOption = typer.Option(1, "--jobs", min=1, help="병렬 작업 수")


def _resolve_config(config: Optional[Path], preset: Optional[str]) -> RunConfig:
    if (config is None) == (preset is None):
        raise typer.BadParameter("--config 와 --preset 중 정확히 하나를 지정하세요")
    return load_config(config) if config is not None else preset_config(preset)


def _guard(action: Callable[[], int]) -> None:
    """라이브러리 예외를 종료 코드로 변환합니다."""
    try:
        code = action()
    except typer.BadParameter as e:
        console.print(f"[red]입력 오류:[/red] {e}")
        raise typer.Exit(EXIT_INVALID)
    except (SolverStagnationError, ContinuationError) as e:
        logger.error(f"풀이 실패: {e}")
        console.print(f"[red]수렴 실패:[/red] {e}")
        raise typer.Exit(EXIT_NONCONVERGENCE)
    except ObstacleMVSError as e:
        logger.error(f"입력 오류: {e}")
        console.print(f"[red]오류:[/red] {e}")
        raise typer.Exit(EXIT_INVALID)
    raise typer.Exit(code)


@app.command()
def solve(config: Optional[Path] = ConfigOption, preset: Optional[str] = PresetOption,
          out: Optional[Path] = OutOption, jobs: int = JobsOption) -> None:
    """R 마다 장애물 문제를 풀어 해, 집합 CSV 와 매니페스트를 기록합니다."""
    def action() -> int:
        runner = SweepRunner(_resolve_config(config, preset), out_dir=out, jobs=jobs)
        outcome = runner.solve_all()
        if not outcome.converged:
            console.print(f"[yellow]미수렴 R:[/yellow] {outcome.failing_radii}")
            return EXIT_NONCONVERGENCE
        console.print(f"풀이 완료: {len(runner.solutions)}개 R → {runner.output.base_dir}")
        return EXIT_OK
    _guard(action)


@app.command()
def verify(config: Optional[Path] = ConfigOption, preset: Optional[str] = PresetOption,
           out: Optional[Path] = OutOption, jobs: int = JobsOption) -> None:
    """활성 검증 스위트를 실행해 report.json 을 기록합니다."""
    def action() -> int:
        runner = SweepRunner(_resolve_config(config, preset), out_dir=out, jobs=jobs)
        outcome = runner.verify()
        if not outcome.converged:
            return EXIT_NONCONVERGENCE
        for name, result in outcome.suites.items():
            status = "[yellow]판정 불가[/yellow]" if result.inconclusive else (
                "[green]통과[/green]" if result.passed else "[red]실패[/red]")
            console.print(f"  {name}: {status}")
        if not outcome.suites_passed:
            return EXIT_SUITE_FAILURE
        if outcome.inconclusive:
            return EXIT_INCONCLUSIVE
        return EXIT_OK
    _guard(action)


@app.command("export-svg")
def export_svg(R: float = typer.Option(..., "--R", help="내보낼 집합의 R"),
               config: Optional[Path] = ConfigOption, preset: Optional[str] = PresetOption,
               out: Optional[Path] = OutOption) -> None:
    """저장된 집합 산출물에서 SVG 도면을 만듭니다 (2차원)."""
    def action() -> int:
        runner = SweepRunner(_resolve_config(config, preset), out_dir=out)
        path = runner.export_svg(R)
        console.print(f"SVG 저장: {path}")
        return EXIT_OK
    _guard(action)


@app.command()
def version() -> None:
    """버전 정보를 출력합니다."""
    info = VersionManager().get_version_info()
    console.print(f"obstacle-mvs v{info['version']} (schema {info['schema_version']}, "
                  f"Python {info['python_version']}, {info['platform']})")


def main():
    """메인 함수"""
    app()


if __name__ == "__main__":
    main()
