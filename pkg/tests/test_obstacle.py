import numpy as np
import pytest
import scipy.sparse as sp

from obstacle_mvs.discretization import assemble, build_grid, make_coefficients
from obstacle_mvs.obstacle import (
    PenaltyProfile,
    comparison_suite,
    complementarity,
    energy,
    gap_report,
    make_general_problem,
    make_problem,
    penalized_energy,
    rebuild,
    solve_general_gap,
    solve_lcp,
    solve_penalized_semilinear,
    solve_variational_penalty,
    unconstrained_bound_check,
)
from obstacle_mvs.obstacle.active_set import MAX_ACTIVE_SET_ITER, semismooth_active_set
from obstacle_mvs.errors import PreconditionError


@pytest.fixture(scope="module")
def small_op():
    return assemble(build_grid(2, 1.0, 1 / 16), make_coefficients("constant"))


class TestPenaltyProfile:
    def test_smoothstep_values(self):
        profile = PenaltyProfile(0.5)
        assert profile.phi(np.array([-1.0, 0.0, 0.25, 0.5, 2.0])).tolist() == [0.0, 0.0, 0.5, 1.0, 1.0]

    def test_negative_width_is_shifted(self):
        profile = PenaltyProfile(-0.5)
        assert profile.phi(-0.5) == 0.0
        assert profile.phi(0.0) == 1.0
        assert profile.phi(-0.25) == pytest.approx(0.5)

    def test_monotone_in_width(self):
        x = np.linspace(-1.0, 1.0, 201)
        assert np.all(PenaltyProfile(0.25).phi(x) >= PenaltyProfile(1.0).phi(x))

    def test_derivatives(self):
        profile = PenaltyProfile(0.3)
        x = np.linspace(-0.5, 0.8, 53)
        step = 1e-6
        assert np.allclose((profile.phi(x + step) - profile.phi(x - step)) / (2 * step), profile.dphi(x), atol=1e-4)
        assert np.allclose((profile.psi(x + step) - profile.psi(x - step)) / (2 * step), profile.phi(x), atol=1e-5)

    @pytest.mark.parametrize("s", [0.0, 1.5, -2.0])
    def test_width_range(self, s):
        with pytest.raises(PreconditionError):
            PenaltyProfile(s)


class TestLCP:
    def test_converged_solution(self, laplace_solution):
        sol = laplace_solution
        assert sol.converged
        assert sol.comp_residual <= 1e-8
        assert sol.v.min() >= 0.0
        assert sol.threshold == pytest.approx(1e-7)
        assert np.all(sol.v[sol.grid.boundary_mask] == 0.0)
        assert sol.active_set[sol.problem.x0]

    def test_complementarity_holds(self, laplace_solution):
        problem = laplace_solution.problem
        residual, y = complementarity(problem, problem.op.restrict(laplace_solution.v))
        assert residual <= 1e-8
        assert y.min() >= -1e-8

    def test_complementarity_product(self, laplace_solution, checker_op):
        checker = solve_lcp(make_problem(checker_op, 0.5), tol=1e-8)
        for sol in (laplace_solution, checker):
            problem = sol.problem
            v = problem.op.restrict(sol.v)
            _, y = complementarity(problem, v)
            scale = max(1.0, float(np.abs(v).max()), float(np.abs(y).max()))
            assert np.all(v * y <= 1e-8 * scale)
            assert v.min() >= 0.0 and y.min() >= -1e-8

    def test_dihedral_symmetry(self, laplace_solution):
        v = laplace_solution.v
        atol = 1e-9 * v.max()
        for image in (v.T, v[::-1, :], v[:, ::-1], v[::-1, ::-1].T):
            assert np.allclose(v, image, atol=atol)

    def test_energy_is_minimal(self, laplace_solution, rng):
        problem = laplace_solution.problem
        grid = problem.grid
        w0, G = laplace_solution.w, problem.ensure_green().values
        base = energy(problem, w0)
        coords = grid.coordinates()
        interior = np.argwhere(grid.interior_mask)
        for _ in range(10):
            center = grid.node_position(tuple(interior[rng.integers(len(interior))]))
            width = grid.h * rng.uniform(2.0, 6.0)
            dist2 = sum((c - center[k]) ** 2 for k, c in enumerate(coords))
            bump = rng.uniform(1e-3, 1e-1) * np.maximum(0.0, 1.0 - dist2 / width ** 2) * grid.interior_mask
            assert energy(problem, w0 - bump) >= base - 1e-10 * abs(base)
            noise = rng.uniform(-1e-2, 1e-2, grid.shape) * grid.interior_mask
            assert energy(problem, np.minimum(w0 + noise, G)) >= base - 1e-10 * abs(base)

    def test_psor_agrees_with_active_set(self, small_op):
        problem = make_problem(small_op, 0.5)
        fast = solve_lcp(problem, tol=1e-9)
        slow = solve_lcp(problem, tol=1e-9, method="psor")
        assert slow.converged and slow.solver_tag == "lcp-psor"
        assert np.allclose(fast.v, slow.v, atol=1e-7)

    def test_sweep_cap_reports_partial_solution(self, small_op):
        sol = solve_lcp(make_problem(small_op, 0.5), method="psor", max_sweeps=1)
        assert not sol.converged
        assert sol.comp_residual > sol.tolerance

    @pytest.mark.parametrize("kwargs", [{"tol": 1e-12}, {"omega": 2.0}, {"method": "newton"}])
    def test_rejects_bad_parameters(self, small_op, kwargs):
        with pytest.raises(PreconditionError):
            solve_lcp(make_problem(small_op, 0.5), **kwargs)

    def test_rejects_non_positive_radius(self, small_op):
        with pytest.raises(PreconditionError):
            make_problem(small_op, 0.0)

    def test_infinite_radius_gives_green(self, small_op):
        problem = make_problem(small_op, float("inf"))
        sol = solve_lcp(problem, tol=1e-9)
        assert np.allclose(sol.v, problem.ensure_green().values, atol=1e-7)
        assert np.allclose(sol.w, 0.0, atol=1e-7)

    def test_rebuild_keeps_coefficients(self, small_op):
        problem = make_problem(small_op, 0.25)
        bigger = rebuild(problem, M=2.0)
        assert bigger.grid.M == 2.0 and bigger.grid.h == small_op.grid.h
        assert bigger.op.coefficients is small_op.coefficients
        assert bigger.R == 0.25


class TestPenaltyRoutes:
    def test_semilinear_close_to_lcp(self, laplace_solution):
        problem = laplace_solution.problem
        sol = solve_penalized_semilinear(problem, PenaltyProfile(1e-3), tol=1e-10)
        assert sol.converged
        assert sol.solver_tag == "semilinear"
        assert np.abs(sol.v - laplace_solution.v).max() <= 5e-3

    def test_semilinear_warm_start(self, laplace_solution):
        problem = laplace_solution.problem
        sol = solve_penalized_semilinear(problem, PenaltyProfile(1e-3), tol=1e-10, initial=laplace_solution.v)
        assert sol.converged
        assert np.abs(sol.v - laplace_solution.v).max() <= 5e-3

    def test_semilinear_decreases_to_lcp(self, laplace_solution):
        problem = laplace_solution.problem
        fields = [solve_penalized_semilinear(problem, PenaltyProfile(2.0 ** -k), tol=1e-10).v for k in range(2, 6)]
        for coarse, fine in zip(fields, fields[1:]):
            assert np.all(fine <= coarse + 1e-7)
        gaps = [float(np.abs(v - laplace_solution.v).max()) for v in fields]
        assert all(v.min() >= -1e-7 for v in fields)
        assert all(np.all(v >= laplace_solution.v - 1e-7) for v in fields)
        assert np.all(np.diff(gaps) < 0)

    def test_signed_widths_bracket_lcp(self, laplace_solution):
        problem = laplace_solution.problem
        above = solve_penalized_semilinear(problem, PenaltyProfile(1 / 16), tol=1e-10).v
        below = solve_penalized_semilinear(problem, PenaltyProfile(-1 / 16), tol=1e-10).v
        assert np.all(below <= laplace_solution.v + 1e-7)
        assert np.all(laplace_solution.v <= above + 1e-7)
        assert below.min() < 0.0

    def test_semilinear_without_density_is_green(self, laplace_op):
        problem = make_problem(laplace_op, float("inf"))
        sol = solve_penalized_semilinear(problem, PenaltyProfile(1e-3), tol=1e-10)
        G = problem.ensure_green().values
        assert sol.converged
        assert np.allclose(sol.v, G, atol=1e-8 * G.max())

    def test_variational_exact_for_small_epsilon(self, laplace_solution):
        sol = solve_variational_penalty(laplace_solution.problem, 1e-3)
        assert sol.converged
        assert np.allclose(sol.v, laplace_solution.v, atol=1e-6)

    def test_variational_large_epsilon_crosses_obstacle(self, laplace_solution):
        problem = laplace_solution.problem
        sol = solve_variational_penalty(problem, 1.0)
        assert 1.0 < problem.q
        assert sol.v.min() < 0.0

    def test_variational_rejects_epsilon(self, laplace_solution):
        with pytest.raises(PreconditionError):
            solve_variational_penalty(laplace_solution.problem, 0.0)

    def test_energies(self, laplace_solution):
        problem = laplace_solution.problem
        w = laplace_solution.w
        assert penalized_energy(problem, w, 1e-3) == pytest.approx(energy(problem, w), abs=1e-6)
        w_above = w + 0.01 * problem.grid.interior_mask
        assert penalized_energy(problem, w_above, 1e-3) > energy(problem, w_above)

    def test_below_unconstrained_minimizer(self, laplace_solution):
        report = unconstrained_bound_check(laplace_solution)
        assert report["passed"]
        assert report["w0_at_x0"] <= report["w_bar_at_x0"]


class TestGeneralProblem:
    def test_rejects_bad_data(self, small_op):
        with pytest.raises(PreconditionError):
            make_general_problem(small_op, f=-1.0)
        with pytest.raises(PreconditionError):
            make_general_problem(small_op, g=np.zeros(small_op.grid.shape))

    def test_gap_solution_properties(self, small_op):
        problem = make_general_problem(small_op)
        sol = solve_general_gap(problem, PenaltyProfile(0.02))
        w, h_diag = sol
        assert sol.converged
        assert np.allclose(w[small_op.grid.boundary_mask], problem.g[small_op.grid.boundary_mask])
        report = gap_report(w, h_diag, problem.f, 0.02)
        assert report["h_equals_f_above_s"]
        assert report["h_zero_below_cutoff"]
        assert report["contact_nodes"] > 0

    def test_gap_shrinks_with_width(self, small_op):
        problem = make_general_problem(small_op)
        fractions = []
        for s in (0.2, 0.02):
            w, h_diag = solve_general_gap(problem, PenaltyProfile(s))
            fractions.append(gap_report(w, h_diag, problem.f, s)["gap_fraction"])
        assert fractions[1] < fractions[0]

    def test_comparison_suite(self, small_op):
        report = comparison_suite(make_general_problem(small_op))
        assert report.passed
        assert [item.item for item in report.items] == [1, 2, 3, 4]
        assert report.to_dict()["max_pairwise_difference"] >= 0.0

    def test_comparison_rejects_order(self, small_op):
        with pytest.raises(PreconditionError):
            comparison_suite(make_general_problem(small_op), s0=0.5, s1=0.5)


class TestActiveSet:
    def test_fixes_sets_on_m_matrix(self, laplace_solution):
        assert laplace_solution.extras["active_set_cycled"] is False
        assert laplace_solution.extras["active_set_iterations"] < MAX_ACTIVE_SET_ITER

    def test_stops_on_repeated_set(self, mocker):
        A = sp.csr_matrix(np.array([[2.0, -1.0], [-1.0, 2.0]]))
        # 크기 2 → [1, -1], 크기 1 → [1]: P 가 {0,1} → {1} → {0} → {1} 로 돈다
        solve = mocker.patch("obstacle_mvs.obstacle.active_set.solve_spd",
                             side_effect=lambda M, b: np.ones(1) if len(b) == 1 else np.array([1.0, -1.0]))
        result = semismooth_active_set(A, np.zeros(2))
        assert result.cycled and not result.converged
        assert result.iterations == 3
        assert solve.call_count == 3
