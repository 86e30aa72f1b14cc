import numpy as np
import pytest

from obstacle_mvs.discretization import assemble, build_grid, check_ellipticity, make_coefficients
from obstacle_mvs.errors import EllipticityError, PreconditionError, SizingError


class TestGrid:
    def test_center_node_at_origin(self):
        grid = build_grid(2, 1.0, 0.25)
        assert grid.n == 9
        assert grid.center_index == (4, 4)
        assert np.allclose(grid.node_position(grid.center_index), 0.0)
        assert grid.radius[grid.center_index] == 0.0

    def test_boundary_layer(self):
        grid = build_grid(3, 1.0, 0.25)
        assert grid.boundary_mask.sum() == 9 ** 3 - 7 ** 3
        assert not grid.boundary_mask[grid.center_index]

    @pytest.mark.parametrize("M, h", [(1.0, 0.3), (1.0, 2 / 9), (0.5, 0.25)])
    def test_rejects_bad_sizing(self, M, h):
        with pytest.raises(SizingError):
            build_grid(2, M, h)

    def test_rejects_dimension(self):
        with pytest.raises(SizingError):
            build_grid(4, 1.0, 0.25)

    def test_index_of(self):
        grid = build_grid(2, 1.0, 0.125)
        assert grid.index_of([0.0, 0.5]) == (8, 12)
        with pytest.raises(PreconditionError):
            grid.index_of([2.0, 0.0])


class TestCoefficients:
    def test_checkerboard_values(self):
        grid = build_grid(2, 1.0, 0.125)
        coeff = make_coefficients("checkerboard", {"alpha": 1.0, "beta": 10.0, "block": 0.5})
        a = coeff.sample(grid)
        assert set(np.unique(a[..., 0, 0])) == {1.0, 10.0}
        assert np.all(a[..., 0, 1] == 0.0)
        assert (coeff.lam, coeff.Lam) == (1.0, 10.0)

    def test_random_field_is_reproducible_across_grids(self):
        coeff = make_coefficients("random_piecewise", {"lambda": 1.0, "Lambda": 5.0}, seed=7)
        coarse = coeff.sample(build_grid(2, 1.0, 0.25))
        fine = coeff.sample(build_grid(2, 1.0, 0.125))
        assert np.array_equal(coarse, fine[::2, ::2])
        eig = np.linalg.eigvalsh(fine.reshape(-1, 2, 2))
        assert eig.min() >= 1.0 - 1e-9 and eig.max() <= 5.0 + 1e-9

    def test_random_field_depends_on_seed(self):
        grid = build_grid(2, 1.0, 0.25)
        a = make_coefficients("random_piecewise", {"lambda": 1.0, "Lambda": 5.0}, seed=1).sample(grid)
        b = make_coefficients("random_piecewise", {"lambda": 1.0, "Lambda": 5.0}, seed=2).sample(grid)
        assert not np.array_equal(a, b)

    def test_invalid_bounds(self):
        with pytest.raises(EllipticityError):
            make_coefficients("random_piecewise", {"lambda": 0.0, "Lambda": 1.0})
        with pytest.raises(EllipticityError):
            make_coefficients("random_piecewise", {"lambda": 2.0, "Lambda": 1.0})

    def test_unknown_kind_and_missing_params(self):
        with pytest.raises(PreconditionError):
            make_coefficients("layered")
        with pytest.raises(PreconditionError):
            make_coefficients("checkerboard", {"alpha": 1.0})

    def test_check_ellipticity_rejects_asymmetric(self):
        values = np.array([[[1.0, 0.5], [0.0, 1.0]]])
        with pytest.raises(EllipticityError):
            check_ellipticity(values, 0.5, 2.0)


class TestAssembly:
    def test_laplacian_is_symmetric_m_matrix(self, laplace_op):
        A = laplace_op.matrix
        assert abs(A - A.T).max() == 0.0
        assert laplace_op.is_m_matrix
        assert np.allclose(np.asarray(A.sum(axis=1)).ravel(), 0.0, atol=1e-9)

    def test_quadratic_is_exact(self, laplace_op):
        grid = laplace_op.grid
        Au = laplace_op.apply(grid.radius ** 2)
        assert np.allclose(Au[grid.interior_mask], -2.0 * grid.dim)

    def test_quadratic_is_exact_3d(self, laplace3d_op):
        grid = laplace3d_op.grid
        Au = laplace3d_op.apply(grid.radius ** 2)
        assert np.allclose(Au[grid.interior_mask], -6.0)

    def test_checkerboard_symmetric(self, checker_op):
        A = checker_op.matrix
        assert abs(A - A.T).max() == 0.0
        assert checker_op.is_m_matrix

    def test_random_anisotropic_stays_m_matrix(self):
        grid = build_grid(2, 1.0, 1 / 16)
        coeff = make_coefficients("random_piecewise", {"lambda": 1.0, "Lambda": 5.0, "block": 0.25}, seed=3)
        op = assemble(grid, coeff)
        assert abs(op.matrix - op.matrix.T).max() == 0.0
        assert op.is_m_matrix

    def test_strong_rotation_reports_violations(self):
        grid = build_grid(2, 1.0, 1 / 16)
        coeff = make_coefficients("random_piecewise",
                                  {"lambda": 1.0, "Lambda": 100.0, "block": 0.25, "max_angle": 0.7}, seed=3)
        op = assemble(grid, coeff)
        assert not op.is_m_matrix
        assert op.violations.size > 0

    def test_harmonic_extension_reproduces_linear(self, laplace_op):
        grid = laplace_op.grid
        x1, x2 = grid.coordinates()
        g = 1.0 + x1 - 2.0 * x2
        u = laplace_op.harmonic_extension(g)
        assert np.allclose(u, g, atol=1e-10)

    @pytest.mark.parametrize("name", ["laplace_op", "checker_op"])
    def test_maximum_principle_random_boundary(self, request, name, rng):
        op = request.getfixturevalue(name)
        grid = op.grid
        for _ in range(10):
            g = rng.uniform(-1.0, 1.0, grid.shape) * grid.boundary_mask
            u = op.harmonic_extension(g)
            lo, hi = g[grid.boundary_mask].min(), g[grid.boundary_mask].max()
            assert np.allclose(u[grid.boundary_mask], g[grid.boundary_mask])
            assert u[grid.interior_mask].min() >= lo - 1e-10
            assert u[grid.interior_mask].max() <= hi + 1e-10
            assert np.abs(op.apply(u)[grid.interior_mask]).max() <= 1e-8 / grid.h ** 2
