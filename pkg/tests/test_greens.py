import numpy as np
import pytest
import scipy.sparse.linalg as spla

from obstacle_mvs.discretization import assemble, build_grid, make_coefficients
from obstacle_mvs.greens import cap_green, cap_levels, check_lsw_bounds, solve_green, spherical_means
from obstacle_mvs.utils.linalg import amg_preconditioner, pcg, solve_spd
from obstacle_mvs.errors import PreconditionError, UnsupportedDimensionError


@pytest.fixture(scope="module")
def green(laplace_op):
    return solve_green(laplace_op)


class TestLinalg:
    def test_pcg_matches_direct(self, laplace_op, rng):
        A = laplace_op.reduced
        b = rng.standard_normal(A.shape[0])
        x, info = pcg(A, b, M=amg_preconditioner(A), tol=1e-12)
        assert info.converged
        assert info.final_residual <= 1e-12
        assert np.allclose(x, spla.spsolve(A.tocsc(), b), atol=1e-9)

    def test_zero_rhs(self, laplace_op):
        x, info = pcg(laplace_op.reduced, np.zeros(laplace_op.reduced.shape[0]))
        assert info.converged and not x.any()

    def test_solve_spd_iterative_path(self, laplace_op):
        A = laplace_op.reduced
        b = np.ones(A.shape[0])
        assert np.allclose(solve_spd(A, b, direct_limit=0), solve_spd(A, b), atol=1e-10)


class TestGreen:
    def test_solves_source_problem(self, green):
        grid = green.grid
        assert green.converged
        assert green.residual() <= 1e-9
        assert np.all(green.values[grid.boundary_mask] == 0.0)
        assert green.values[grid.interior_mask].min() > 0.0
        assert green.peak == green.values.max()

    def test_symmetric_for_isotropic_coefficients(self, green):
        assert np.allclose(green.values, green.values.T, atol=1e-10)
        assert np.allclose(green.values, green.values[::-1, :], atol=1e-10)

    def test_spherical_means_decrease(self, green):
        means = spherical_means(green, [0.125, 0.25, 0.5, 0.75])
        assert np.all(np.diff(means) < 0)

    def test_near_logarithmic_kernel(self, green):
        # 2차원에서 G(r1) - G(r2) ≈ log(r2/r1)/(2π)
        g1, g2 = spherical_means(green, [0.125, 0.25])
        assert g1 - g2 == pytest.approx(np.log(2.0) / (2 * np.pi), rel=0.05)

    def test_source_near_boundary_rejected(self, laplace_op):
        with pytest.raises(PreconditionError):
            solve_green(laplace_op, (1, 32))

    def test_off_center_source(self, laplace_op):
        shifted = solve_green(laplace_op, (24, 32))
        assert shifted.peak == shifted.values.max()
        assert shifted.distance()[24, 32] == 0.0

    def test_reciprocity_on_random_pairs(self, checker_op, rng):
        grid = checker_op.grid
        for _ in range(4):
            a, b = (tuple(int(i) for i in rng.integers(2, grid.n - 2, size=grid.dim)) for _ in range(2))
            Ga, Gb = solve_green(checker_op, a), solve_green(checker_op, b)
            assert Ga.values[b] == pytest.approx(Gb.values[a], rel=1e-7)

    def test_doubled_coefficients_halve_green(self, grid2d):
        ops = [assemble(grid2d, make_coefficients("checkerboard", {"alpha": k, "beta": 10.0 * k, "block": 0.25}))
               for k in (1.0, 2.0)]
        G1, G2 = (solve_green(op).values for op in ops)
        assert np.allclose(G2, 0.5 * G1, rtol=1e-7, atol=1e-10 * G1.max())


class TestCaps:
    def test_cap_levels_order(self, green):
        c_sm, c_big = cap_levels(green, 0.25)
        assert 0 < c_sm <= c_big

    def test_capped_green(self, green):
        capped = cap_green(green, 0.25)
        assert capped.values.max() == pytest.approx(capped.cap_level)
        assert np.all(capped.values <= green.values)
        far = green.distance() > 0.5
        assert np.array_equal(capped.values[far], green.values[far])

    def test_radius_too_small(self, green):
        with pytest.raises(PreconditionError):
            cap_levels(green, green.grid.h)


class TestGrowthBounds:
    def test_rejects_two_dimensions(self, green):
        with pytest.raises(UnsupportedDimensionError):
            check_lsw_bounds(green, (0.25, 0.5))

    def test_three_dimensional_bounds(self):
        op = assemble(build_grid(3, 1.0, 1 / 16), make_coefficients("constant"))
        report = check_lsw_bounds(solve_green(op), (0.25, 0.375), ratio_bound=2.0)
        assert report.c1 > 0
        assert report.c2 < 1.1 / (4 * np.pi)
        assert report.passed
        assert report.to_dict()["samples"] == report.samples > 0

    def test_bound_ratio_stable_under_refinement(self):
        ratios = []
        for h in (1 / 8, 1 / 16):
            op = assemble(build_grid(3, 2.0, h), make_coefficients("constant"))
            ratios.append(check_lsw_bounds(solve_green(op), (0.5, 0.75)).ratio)
        assert ratios[1] == pytest.approx(ratios[0], rel=0.1)

    def test_annulus_validation(self, laplace3d_op):
        green3 = solve_green(laplace3d_op)
        with pytest.raises(PreconditionError):
            check_lsw_bounds(green3, (0.125, 0.5))
