"""
R 스윕 실행기

설정 하나로 작용소를 조립하고, R 마다 장애물 문제를 풀어 평균값 집합을 추출한 뒤 활성화된 검증 스위트를
실행합니다. 독립 작업(R 별 풀이, 스위트)은 스레드 풀에서 병렬로 돌고, 결과는 항상 R 순서와 스위트 선언
순서로 모읍니다. 매니페스트와 보고서에는 시각 정보를 넣지 않으므로 같은 설정은 같은 바이트를 만듭니다.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from .analysis.convergence import convergence_study
from .analysis.fb_measure import fb_measure_decay
from .analysis.growth import quadratic_growth_check
from .config.logger import logger, run_journal
from .config.run_config import RunConfig
from .discretization.assembly import DiscreteOperator, assemble
from .discretization.coefficients import make_coefficients
from .discretization.grid import build_grid
from .errors import EmptySetError, ObstacleMVSError, PreconditionError, SizingError, UnsupportedDimensionError
from .greens.green import solve_green
from .mvset.averages import monotone_average_check, pole_outside
from .mvset.checks import ball_inclusions, nesting_violations, truncation_check, volume_identity
from .mvset.sets import MeanValueSet, extract_set, inner_radius, outer_radius, unit_ball_volume
from .obstacle.comparison import comparison_suite
from .obstacle.general import make_general_problem
from .obstacle.lcp import solve_lcp
from .obstacle.penalty import PenaltyProfile
from .obstacle.problem import ObstacleProblem, ObstacleSolution, make_problem
from .obstacle.semilinear import solve_penalized_semilinear
from .obstacle.variational import solve_variational_penalty
from .storage.artifacts import ArtifactStore
from .storage.file_manager import OutputManager
from .storage.svg import render_set_svg
from .utils.linalg import solve_spd
from .utils.seeds import describe_streams, stream, stream_seed
from .utils.version_manager import VersionManager

RANDOM_STREAMS = ("coefficients", "growth")
PENALTY_EPSILONS = (1e-1, 1e-2, 1e-3)
CROSS_RELATIVE = 1e-2
GROWTH_POINTS = 8
GROWTH_MIN_CELLS = 24


@dataclass
class SuiteResult:
    passed: bool
    data: Dict[str, Any] = field(default_factory=dict)
    inconclusive: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {"passed": self.passed, "inconclusive": self.inconclusive, "data": self.data}


@dataclass
class RunOutcome:
    """CLI 종료 코드 결정에 필요한 요약"""
    converged: bool
    failing_radii: List[float] = field(default_factory=list)
    suites: Dict[str, SuiteResult] = field(default_factory=dict)

    @property
    def suites_passed(self) -> bool:
        return all(result.passed or result.inconclusive for result in self.suites.values())

    @property
    def inconclusive(self) -> bool:
        return any(result.inconclusive for result in self.suites.values())


class SweepRunner:
    """설정 하나에 대한 풀이, 검증, 내보내기"""

    def __init__(self, config: RunConfig, out_dir: Optional[Path] = None, jobs: int = 1):
        self.config = config
        self.jobs = max(1, int(jobs))
        self.output = OutputManager(out_dir if out_dir is not None else config.output.directory)
        self.store = ArtifactStore(self.output)
        self.timings: Dict[str, Dict[str, float]] = {"solves": {}, "suites": {}}
        self.grid = build_grid(config.grid.dim, config.grid.M, config.grid.h)
        self._op: Optional[DiscreteOperator] = None
        self.solutions: List[ObstacleSolution] = []
        self.sets: List[MeanValueSet] = []

    # ------------------------------------------------------------------ 조립과 풀이

    @property
    def op(self) -> DiscreteOperator:
        if self._op is None:
            cfg = self.config.coefficients
            seed = cfg.seed if cfg.seed is not None else stream_seed(self.config.seed, "coefficients")
            coeff = make_coefficients(cfg.kind, cfg.params, seed=seed)
            self._op = assemble(self.grid, coeff, self.config.problem.offset)
            if not self._op.is_m_matrix:
                logger.warning(f"조립된 행렬이 M-행렬이 아닙니다 (위반 행 {self._op.violations.size}개)")
        return self._op

    def problem(self, R: float) -> ObstacleProblem:
        return make_problem(self.op, R)

    def solve_one(self, R: float) -> ObstacleSolution:
        """설정된 경로로 R 하나를 풉니다."""
        p = self.config.problem
        started = time.perf_counter()
        problem = self.problem(R)
        if p.route == "semilinear":
            sol = solve_penalized_semilinear(problem, PenaltyProfile(p.s), tol=p.tol)
        elif p.route == "variational":
            sol = solve_variational_penalty(problem, p.epsilon, tol=p.tol)
        else:
            sol = solve_lcp(problem, tol=p.tol, omega=p.omega, method=p.lcp_method)
        seconds = time.perf_counter() - started
        self.timings["solves"][f"{R:g}"] = seconds
        run_journal.log_solve(R, sol.solver_tag, sol.converged, sol.iterations, sol.comp_residual, seconds)
        return sol

    def _map(self, fn: Callable, items: List[Any]) -> List[Any]:
        """입력 순서를 보존하는 병렬 map"""
        if self.jobs == 1 or len(items) <= 1:
            return [fn(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.jobs) as executor:
            return list(executor.map(fn, items))

    def solve_all(self) -> RunOutcome:
        """모든 R 을 풀고 해, 집합 CSV 와 매니페스트를 기록합니다."""
        _ = self.op
        self.solutions = self._map(self.solve_one, list(self.config.radii))
        failing = [sol.R for sol in self.solutions if not sol.converged]
        self.sets = [extract_set(sol) for sol in self.solutions if sol.converged]

        if "csv" in self.config.output.formats:
            for sol in self.solutions:
                self.store.write_solution(sol)
            for mvs in self.sets:
                self.store.write_indicator(mvs)
        if failing:
            logger.error(f"미수렴 R: {failing}")
        outcome = RunOutcome(converged=not failing, failing_radii=failing)
        self.write_manifest(outcome)
        return outcome

    # ------------------------------------------------------------------ 매니페스트

    def manifest(self, outcome: RunOutcome) -> Dict[str, Any]:
        sets = {f"{s.R:g}": {**s.to_dict(), "sandwich": s.sandwich()} for s in self.sets}
        data = {
            "config": self.config.model_dump(mode="json"),
            "config_hash": self.config.config_hash(),
            "environment": VersionManager().get_version_info(),
            "random_streams": describe_streams(self.config.seed, RANDOM_STREAMS),
            "grid": self.grid.to_dict(),
            "operator": self.op.to_dict(),
            "solves": [sol.to_dict() for sol in self.solutions],
            "sets": sets,
            "converged": outcome.converged,
            "failing_radii": outcome.failing_radii,
        }
        if outcome.suites:
            data["suite_verdicts"] = {name: r.passed for name, r in outcome.suites.items()}
        return data

    def write_manifest(self, outcome: RunOutcome) -> None:
        if "json" not in self.config.output.formats:
            return
        self.store.write_json(self.output.manifest_path(), self.manifest(outcome))
        self.store.write_json(self.output.timings_path(), self.timings)
        run_journal.log_export("manifest", str(self.output.manifest_path()))

    # ------------------------------------------------------------------ 검증

    def verify(self) -> RunOutcome:
        """풀이 후 활성 스위트를 실행하고 report.json 을 기록합니다."""
        outcome = self.solve_all()
        names = self.config.suites.enabled()
        if names and not outcome.converged:
            logger.error("미수렴 풀이가 있어 검증 스위트를 건너뜁니다")
            return outcome

        results = self._map(self._run_suite, names)
        outcome.suites = dict(zip(names, results))
        for name, result in outcome.suites.items():
            run_journal.log_suite(name, result.passed, {"inconclusive": result.inconclusive} if result.inconclusive
                                  else None)

        report = {
            "config_hash": self.config.config_hash(),
            "name": self.config.name,
            "suites": {name: r.to_dict() for name, r in outcome.suites.items()},
            "passed": outcome.suites_passed and not outcome.inconclusive,
            "inconclusive": outcome.inconclusive,
        }
        self.store.write_json(self.output.report_path(), report)
        self.write_manifest(outcome)
        logger.info(f"검증 완료: {sum(r.passed for r in results)}/{len(results)} 통과")
        return outcome

    def _run_suite(self, name: str) -> SuiteResult:
        started = time.perf_counter()
        try:
            result = getattr(self, f"_suite_{name}")()
        except ObstacleMVSError as e:
            logger.error(f"스위트 {name} 실행 불가: {e}")
            result = SuiteResult(passed=False, data={"error": str(e)})
        self.timings["suites"][name] = time.perf_counter() - started
        return result

    def _largest(self) -> ObstacleSolution:
        return max(self.solutions, key=lambda s: s.R)

    def _suite_nesting(self) -> SuiteResult:
        pairs = []
        for inner, outer in zip(self.sets, self.sets[1:]):
            pairs.append({"R": inner.R, "S": outer.R, "violations": int(nesting_violations(inner, outer).sum())})
        return SuiteResult(passed=all(p["violations"] == 0 for p in pairs), data={"pairs": pairs})

    def _suite_volume(self) -> SuiteResult:
        report = volume_identity(self.sets)
        data = report.to_dict()
        data["max_mass_balance_deviation"] = max(abs(k - 1.0) for k in report.kappas)
        return SuiteResult(passed=report.passed, data=data)

    def _suite_inclusions(self) -> SuiteResult:
        coeff = self.op.coefficients
        report = ball_inclusions(self.sets, coeff.lam, coeff.Lam)
        data = report.to_dict()
        data["sets"] = [{"R": s.R, "connected": s.connected, "components": s.components,
                         "sandwich": s.sandwich()} for s in self.sets]
        return SuiteResult(passed=report.passed, data=data)

    def _truncation_boxes(self) -> Tuple[float, float]:
        M, h, dim = self.grid.M, self.grid.h, self.grid.dim
        try:
            build_grid(dim, M / 2, h)
            build_grid(dim, M / 2 + 1, h)
            return M / 2, M / 2 + 1
        except SizingError:
            return M, M + 1

    def _suite_truncation(self) -> SuiteResult:
        p = self.config.problem
        M1, M2 = self._truncation_boxes()
        report = truncation_check(self.problem(min(self.config.radii)), M1, M2, tol=p.tol,
                                  method=p.lcp_method, omega=p.omega)
        return SuiteResult(passed=report.passed, data=report.to_dict(), inconclusive=report.inconclusive)

    def _bump(self, width: float) -> np.ndarray:
        """x0 중심의 비음 밀도 ρ = max(0, 1 - |x|²/σ²)"""
        return np.maximum(0.0, 1.0 - (self.grid.radius / width) ** 2)

    def _suite_monotone_average(self) -> SuiteResult:
        op = self.op
        width = min(inner_radius(s.indicator, self.grid) for s in self.sets)
        rho = op.restrict(self._bump(width))
        superharmonic = op.extend(solve_spd(op.reduced, rho))
        cases = [("constant-sub", np.ones(self.grid.shape), "sub"),
                 ("constant-super", np.ones(self.grid.shape), "super"),
                 ("bump-super", superharmonic, "super"),
                 ("bump-sub", -superharmonic, "sub")]
        data: Dict[str, Any] = {}
        try:
            node = pole_outside(self.sets)
            cases.append(("pole-super", solve_green(op, node).values, "super"))
            data["pole"] = {"node": list(node)}
        except PreconditionError as e:
            logger.warning(f"극점 사례를 건너뜁니다: {e}")
            data["pole"] = {"skipped": str(e)}

        passed = True
        for label, field_, kind in cases:
            report = monotone_average_check(field_, kind, self.sets)
            data[label] = report.to_dict()
            passed &= report.passed
            if "csv" in self.config.output.formats:
                header = ["R", "measure", "average"] + (["weighted"] if report.curve.weighted else [])
                self.store.write_curve(f"average_curve_{label}", header, report.curve.rows())
        return SuiteResult(passed=passed, data=data)

    def _growth_solution(self) -> Tuple[ObstacleSolution, Optional[float]]:
        """
        성장 검사용 해

        가장 큰 집합의 내접 반지름이 GROWTH_MIN_CELLS 셀보다 작으면 같은 격자에서 집합 반지름이 약 M/2 인
        R 을 추가로 풉니다.
        """
        largest = self._largest()
        cells = max(self.sets, key=lambda s: s.R).r_in / self.grid.h
        if cells >= GROWTH_MIN_CELLS:
            return largest, None
        dim, M = self.grid.dim, self.grid.M
        R = float(unit_ball_volume(dim) ** (1.0 / dim) * M / 2)
        logger.info(f"집합 내접 반지름 {cells:.1f}h 가 작아 성장 검사용 R={R:.4g} 을 추가로 풉니다")
        p = self.config.problem
        return solve_lcp(self.problem(R), tol=p.tol, omega=p.omega, method=p.lcp_method), R

    def _suite_growth(self) -> SuiteResult:
        sol, extra_R = self._growth_solution()
        if not sol.converged:
            return SuiteResult(passed=False, data={"error": f"성장 검사용 R={sol.R:g} 풀이 미수렴"})
        report = quadratic_growth_check(sol, n_points=GROWTH_POINTS, rng=stream(self.config.seed, "growth"))
        if "csv" in self.config.output.formats:
            self.store.write_curve("growth", ["point", "r", "sup"], report.rows())
        data = report.to_dict()
        data["R"] = sol.R
        data["extra_solve"] = extra_R is not None
        return SuiteResult(passed=report.passed, data=data)

    def _refinement(self) -> List[float]:
        h = self.grid.h
        return [4 * h, 2 * h, h]

    def _suite_fb_measure(self) -> SuiteResult:
        p = self.config.problem
        report = fb_measure_decay(self.problem(max(self.config.radii)), self._refinement(), tol=p.tol,
                                  method=p.lcp_method)
        return SuiteResult(passed=report.passed, data=report.to_dict())

    def _suite_convergence(self) -> SuiteResult:
        p = self.config.problem
        report = convergence_study(self.problem(max(self.config.radii)), self._refinement(), tol=p.tol,
                                   method=p.lcp_method, s=p.s, epsilon=p.epsilon)
        return SuiteResult(passed=report.passed, data=report.to_dict())

    def _suite_comparison(self) -> SuiteResult:
        report = comparison_suite(make_general_problem(self.op))
        return SuiteResult(passed=report.passed, data=report.to_dict())

    def _lcp(self, R: float) -> ObstacleSolution:
        for sol in self.solutions:
            if sol.R == R and sol.solver_tag.startswith("lcp"):
                return sol
        p = self.config.problem
        return solve_lcp(self.problem(R), tol=p.tol, omega=p.omega, method=p.lcp_method)

    def _suite_penalty_orderings(self) -> SuiteResult:
        """ε1 ≤ ε2 → w_ε1 ≤ w_ε2, 그리고 w_0 ≤ w_ε (v 변수로는 부등호 반대)"""
        p = self.config.problem
        R = min(self.config.radii)
        tol = 10.0 * p.tol
        base = self._lcp(R)
        fields = {eps: solve_variational_penalty(base.problem, eps, tol=p.tol).v for eps in sorted(PENALTY_EPSILONS)}
        checks = []
        epsilons = sorted(fields)
        for e1, e2 in zip(epsilons, epsilons[1:]):
            checks.append({"statement": f"w_{e1:g} ≤ w_{e2:g}", "excess": float((fields[e2] - fields[e1]).max())})
        for eps in epsilons:
            checks.append({"statement": f"w_0 ≤ w_{eps:g}", "excess": float((fields[eps] - base.v).max())})
        for item in checks:
            item["passed"] = item["excess"] <= tol
        return SuiteResult(passed=all(c["passed"] for c in checks), data={"R": R, "tol": tol, "checks": checks})

    def _suite_cross_solver(self) -> SuiteResult:
        p = self.config.problem
        rows, passed = [], True
        for R in self.config.radii:
            base = self._lcp(R)
            semi = solve_penalized_semilinear(base.problem, PenaltyProfile(p.s), tol=p.tol, initial=base.v)
            var = solve_variational_penalty(base.problem, p.epsilon, tol=p.tol)
            bound = CROSS_RELATIVE * float(base.v.max())
            row = {
                "R": R,
                "lcp_vs_semilinear": float(np.abs(semi.v - base.v).max()),
                "lcp_vs_variational": float(np.abs(var.v - base.v).max()),
                "bound": bound,
            }
            row["passed"] = row["lcp_vs_semilinear"] <= bound and row["lcp_vs_variational"] <= bound
            passed &= row["passed"]
            rows.append(row)
        return SuiteResult(passed=passed, data={"s": p.s, "epsilon": p.epsilon, "radii": rows})

    # ------------------------------------------------------------------ 내보내기

    def export_svg(self, R: float) -> Path:
        """
        저장된 집합 CSV 에서 SVG 를 만듭니다.

        Raises:
            UnsupportedDimensionError: 3차원
            ConfigError: 집합 산출물 없음
        """
        if self.grid.dim != 2:
            raise UnsupportedDimensionError("SVG 내보내기는 2차원만 지원합니다. 3차원은 단면 CSV (sets/slices_R*.csv) 를 사용하세요")
        indicator = self.store.load_indicator(R, self.grid)
        if not indicator.any():
            raise EmptySetError(f"R={R:g} 의 집합 산출물이 비었습니다")
        svg = render_set_svg(indicator, self.grid, inner_radius(indicator, self.grid),
                             outer_radius(indicator, self.grid), R)
        path = self.output.write_text(self.output.svg_path(R), svg)
        run_journal.log_export("svg", str(path))
        return path
