import random
from fractions import Fraction

import numpy as np
import pytest

from resloci.linalg import (
    COMPLEX,
    RATIONAL,
    Matrix,
    ModeError,
    kernel_basis,
    rank,
    solve_linear,
)


def rational(rows):
    return Matrix.from_rows(rows, RATIONAL)


def cplx(rows):
    return Matrix.from_rows(rows, COMPLEX)


def test_rank_identity():
    assert rank(Matrix.identity(3, RATIONAL)) == 3


def test_rank_zero_matrix():
    assert rank(rational([[0, 0], [0, 0]])) == 0


def test_rank_proportional_rows():
    assert rank(rational([[1, 2], [2, 4]])) == 1


def test_kernel_identity_empty():
    k = kernel_basis(Matrix.identity(2, RATIONAL))
    assert k.cols == 0


def test_kernel_one_row():
    k = kernel_basis(rational([[1, 1]]))
    assert k.cols == 1
    v = k.column(0)
    assert v[0] == -v[1] != 0


def test_kernel_proportional_rows():
    k = kernel_basis(rational([[1, 2], [2, 4]]))
    assert k.cols == 1
    v = k.column(0)
    assert v[0] * (-1) == v[1] * 2  # proportional to (2, -1)


def test_solve_identity():
    assert solve_linear(Matrix.identity(2, RATIONAL), [1, 2]) == (1, 2)


def test_solve_underdetermined():
    x = solve_linear(rational([[1, 1]]), [3])
    assert x is not None and x[0] + x[1] == 3


def test_solve_inconsistent():
    assert solve_linear(rational([[1], [1]]), [1, 2]) is None


def test_solve_inconsistent_floating():
    m = cplx([[1.0], [1.0]])
    assert solve_linear(m, [1.0, 2.0], tol=1e-8) is None
    x = solve_linear(m, [2.0, 2.0], tol=1e-8)
    assert x is not None and abs(x[0] - 2.0) < 1e-10


def test_tol_preconditions():
    m = rational([[1]])
    with pytest.raises(ValueError):
        rank(m, 1e-8)
    with pytest.raises(ValueError):
        rank(cplx([[1.0]]), 0)


def test_mode_mixing_rejected():
    with pytest.raises(ModeError):
        Matrix.from_rows([[0.5]], RATIONAL)
    with pytest.raises(ModeError):
        Matrix.from_rows([[Fraction(1, 2)]], COMPLEX)


def _random_rational_matrix(rng, rows, cols):
    return rational(
        [[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(cols)]
         for _ in range(rows)]
    )


def test_rank_plus_kernel_dimension_rational():
    rng = random.Random(101)
    for _ in range(200):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        m = _random_rational_matrix(rng, r, c)
        assert rank(m) + kernel_basis(m).cols == c


def test_rank_plus_kernel_dimension_floating():
    rng = np.random.default_rng(7)
    for _ in range(200):
        r, c = int(rng.integers(1, 7)), int(rng.integers(1, 7))
        m = cplx((rng.normal(size=(r, c)) + 1j * rng.normal(size=(r, c))).tolist())
        assert rank(m, 1e-8) + kernel_basis(m, 1e-8).cols == c


def test_rank_transpose():
    rng = random.Random(55)
    for _ in range(100):
        m = _random_rational_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        assert rank(m) == rank(m.transpose())


def test_exact_and_floating_ranks_agree():
    rng = random.Random(9)
    for _ in range(100):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        rows = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
        exact = rank(rational(rows))
        floating = rank(cplx([[float(x) for x in row] for row in rows]), 1e-10)
        assert exact == floating


def test_kernel_residual_exact():
    rng = random.Random(3)
    for _ in range(50):
        m = _random_rational_matrix(rng, rng.randint(1, 5), rng.randint(2, 6))
        k = kernel_basis(m)
        for j in range(k.cols):
            col = k.column(j)
            for i in range(m.rows):
                assert sum(a * b for a, b in zip(m.row(i), col)) == 0


def test_kernel_residual_floating():
    rng = np.random.default_rng(12)
    for _ in range(50):
        a = rng.normal(size=(3, 5)) + 1j * rng.normal(size=(3, 5))
        m = cplx(a.tolist())
        k = kernel_basis(m, 1e-8)
        arr = np.array(k.entries, dtype=complex).reshape(k.rows, k.cols)
        if k.cols:
            assert np.linalg.norm(a @ arr) < 1e-8 * np.linalg.norm(a) * k.cols
