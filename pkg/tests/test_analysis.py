import numpy as np
import pytest

from obstacle_mvs.analysis import (
    SLOPE_RANGE,
    ball_sup,
    convergence_study,
    fb_measure_decay,
    free_boundary_nodes,
    growth_profile,
    growth_radii,
    quadratic_growth_check,
    restrict_to_coarse,
)
from obstacle_mvs.obstacle import make_problem, solve_lcp
from obstacle_mvs.errors import PreconditionError


@pytest.fixture(scope="module")
def growth_solution(laplace_fine_op):
    return solve_lcp(make_problem(laplace_fine_op, 0.75), tol=1e-9)


class TestFreeBoundary:
    def test_band_of_square(self):
        mask = np.zeros((7, 7), dtype=bool)
        mask[2:5, 2:5] = True
        band = free_boundary_nodes(mask)
        assert band.sum() == 8
        assert not band[3, 3]

    def test_radii_start_at_four_cells(self, grid2d):
        radii = growth_radii(grid2d, grid2d.center_index)
        h = grid2d.h
        assert radii[0] == pytest.approx(4 * h)
        assert radii[-1] <= 0.5 * grid2d.M + 1e-12
        assert len(radii) >= 4

    def test_radii_fall_back_to_sqrt_two(self, laplace_fine_op):
        grid = laplace_fine_op.grid
        point = grid.index_of([0.42, 0.0])
        radii = growth_radii(grid, point, grid.center_index)
        assert len(radii) == 4
        assert radii[1] / radii[0] == pytest.approx(np.sqrt(2.0))

    def test_ball_sup(self, grid2d):
        value = ball_sup(grid2d.radius, grid2d, grid2d.center_index, 0.25)
        assert value == pytest.approx(0.25)


class TestQuadraticGrowth:
    def test_laplace_growth_is_quadratic(self, growth_solution):
        report = quadratic_growth_check(growth_solution, n_points=8)
        low, high = report.slope_range
        assert len(report.fb_points) == 8
        assert SLOPE_RANGE[0] <= low <= high <= SLOPE_RANGE[1]
        assert max(report.ratios) <= 10.0
        assert report.passed
        assert len(report.rows()) == sum(len(r) for r in report.radii)

    def test_sampling_is_seeded(self, growth_solution):
        a = quadratic_growth_check(growth_solution, n_points=4, rng=np.random.default_rng(5))
        b = quadratic_growth_check(growth_solution, n_points=4, rng=np.random.default_rng(5))
        assert a.fb_points == b.fb_points

    def test_source_node_cannot_be_fitted(self, growth_solution):
        mask = np.zeros(growth_solution.grid.shape, dtype=bool)
        mask[64, 64] = True
        with pytest.raises(PreconditionError):
            growth_profile(growth_solution.v, mask, growth_solution.grid, singular=(64, 64))

    def test_requires_free_boundary(self, growth_solution):
        empty = np.zeros(growth_solution.grid.shape, dtype=bool)
        with pytest.raises(PreconditionError):
            growth_profile(growth_solution.v, empty, growth_solution.grid)

    def test_requires_converged_solution(self, laplace_op):
        sol = solve_lcp(make_problem(laplace_op, 0.5), method="psor", max_sweeps=1)
        with pytest.raises(PreconditionError):
            quadratic_growth_check(sol)


class TestFBMeasure:
    def test_band_measure_decreases(self, laplace_op):
        report = fb_measure_decay(make_problem(laplace_op, 0.5), [1 / 8, 1 / 16, 1 / 32])
        assert report.decreasing
        assert report.dimension == pytest.approx(1.0, abs=0.4)
        assert report.passed

    @pytest.mark.parametrize("h_list", [[1 / 8, 1 / 16], [1 / 8, 1 / 32, 1 / 16]])
    def test_levels(self, laplace_op, h_list):
        with pytest.raises(PreconditionError):
            fb_measure_decay(make_problem(laplace_op, 0.5), h_list)


class TestConvergence:
    def test_restrict_to_coarse(self):
        fine = np.arange(25.0).reshape(5, 5)
        assert restrict_to_coarse(fine, 2).tolist() == [[0.0, 2.0, 4.0], [10.0, 12.0, 14.0], [20.0, 22.0, 24.0]]

    def test_identical_resolution_gives_zero(self, laplace_op):
        report = convergence_study(make_problem(laplace_op, 0.5), [1 / 32, 1 / 32], s=0.0, epsilon=0.0)
        assert report.successive == [0.0]
        assert report.routes == {}
        assert report.passed

    def test_refinement_and_routes(self, laplace_op):
        report = convergence_study(make_problem(laplace_op, 1.0), [1 / 16, 1 / 32, 1 / 64])
        assert report.excluded_radius == pytest.approx(0.25)
        assert report.refinement_passed
        assert set(report.routes) == {"lcp_vs_semilinear", "lcp_vs_variational"}
        assert report.routes_passed

    def test_rejects_non_nested_levels(self, laplace_op):
        with pytest.raises(PreconditionError):
            convergence_study(make_problem(laplace_op, 0.5), [1 / 16, 1 / 24])
