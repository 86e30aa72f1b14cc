"""
공용 픽스처

데스크 규모 격자(2차원 M=1, h=1/32)를 기본으로 씁니다. 수용 해상도 실행은 @pytest.mark.slow 입니다.
"""

import os
import tempfile

# 패키지 로거가 홈 디렉토리 대신 임시 디렉토리에 쓰도록
os.environ.setdefault("OBSTACLE_MVS_LOG_DIR", tempfile.mkdtemp(prefix="obstacle_mvs_logs_"))

import numpy as np
import pytest

from obstacle_mvs.discretization import assemble, build_grid, make_coefficients
from obstacle_mvs.obstacle import make_problem, solve_lcp
from obstacle_mvs.mvset import extract_set


@pytest.fixture(scope="session")
def grid2d():
    return build_grid(2, 1.0, 1 / 32)


@pytest.fixture(scope="session")
def laplace_op(grid2d):
    return assemble(grid2d, make_coefficients("constant"))


@pytest.fixture(scope="session")
def checker_op(grid2d):
    coeff = make_coefficients("checkerboard", {"alpha": 1.0, "beta": 10.0, "block": 0.25})
    return assemble(grid2d, coeff)


@pytest.fixture(scope="session")
def laplace_fine_op():
    return assemble(build_grid(2, 1.0, 1 / 64), make_coefficients("constant"))


@pytest.fixture(scope="session")
def laplace3d_op():
    return assemble(build_grid(3, 1.0, 1 / 8), make_coefficients("constant"))


@pytest.fixture(scope="session")
def laplace_solution(laplace_op):
    return solve_lcp(make_problem(laplace_op, 0.5), tol=1e-8)


@pytest.fixture(scope="session")
def laplace_sets(laplace_op):
    return [extract_set(solve_lcp(make_problem(laplace_op, R), tol=1e-8)) for R in (0.25, 0.375, 0.5)]


@pytest.fixture(scope="session")
def checker_sets(checker_op):
    return [extract_set(solve_lcp(make_problem(checker_op, R), tol=1e-8)) for R in (0.25, 0.5)]


@pytest.fixture
def rng():
    return np.random.default_rng(0)
