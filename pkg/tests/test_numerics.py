import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from psrfr.errors import (
    IllConditioned,
    InsufficientRows,
    NonFiniteData,
    NotPositiveDefinite,
    NotSymmetric,
    RankDeficient,
    ShapeMismatch,
)
from psrfr.numerics import (
    DataMatrix,
    apply_sign_convention,
    center_and_covariance,
    cholesky_spd,
    gram_schmidt,
    projection,
    solve_spd,
    sym_eig_desc,
)


def _spd(seed, p):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((p, p))
    return m @ m.T + p * np.eye(p)


class TestDataMatrix:
    def test_vector_becomes_column(self):
        assert DataMatrix(np.arange(4.0)).values.shape == (4, 1)

    def test_rejects_single_row(self):
        with pytest.raises(InsufficientRows):
            DataMatrix(np.ones((1, 3)))

    def test_rejects_nan(self):
        with pytest.raises(NonFiniteData):
            DataMatrix(np.array([[1.0, np.nan], [2.0, 3.0]]))

    def test_rejects_three_dimensional_input(self):
        with pytest.raises(ShapeMismatch):
            DataMatrix(np.ones((2, 2, 2)))


def test_center_and_covariance_matches_numpy():
    rng = np.random.default_rng(3)
    x = rng.standard_normal((40, 4))
    stats = center_and_covariance(x)
    np.testing.assert_allclose(stats.mean, x.mean(axis=0), atol=1e-14)
    np.testing.assert_allclose(stats.covariance, np.cov(x, rowvar=False), atol=1e-12)
    np.testing.assert_allclose(stats.centered.mean(axis=0), 0.0, atol=1e-12)
    assert stats.n == 40


@given(seed=st.integers(0, 2**32 - 1))
def test_covariance_is_identical_under_row_permutation(seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((37, 6)) * rng.uniform(0.1, 50.0, size=6)
    order = rng.permutation(37)
    base = center_and_covariance(x)
    shuffled = center_and_covariance(x[order])
    assert np.array_equal(shuffled.covariance, base.covariance)
    assert np.array_equal(shuffled.mean, base.mean)
    np.testing.assert_array_equal(shuffled.centered, base.centered[order])


class TestCholesky:
    def test_factor_reconstructs(self):
        a = _spd(1, 5)
        lower = cholesky_spd(a)
        np.testing.assert_allclose(lower @ lower.T, a, atol=1e-10)
        assert np.allclose(np.triu(lower, 1), 0.0)

    def test_indefinite(self):
        with pytest.raises(NotPositiveDefinite):
            cholesky_spd(np.array([[1.0, 2.0], [2.0, 1.0]]))

    def test_ill_conditioned(self):
        with pytest.raises(IllConditioned):
            cholesky_spd(np.diag([1.0, 1e-14]))

    def test_non_square(self):
        with pytest.raises(ShapeMismatch):
            cholesky_spd(np.ones((2, 3)))


@given(seed=st.integers(0, 2**32 - 1), p=st.integers(1, 8))
def test_solve_spd_matches_dense_solve(seed, p):
    a = _spd(seed, p)
    b = np.random.default_rng(seed + 1).standard_normal((p, 3))
    np.testing.assert_allclose(solve_spd(a, b), np.linalg.solve(a, b), rtol=1e-8, atol=1e-10)


@given(seed=st.integers(0, 2**32 - 1), p=st.integers(2, 10), log_cond=st.floats(0.0, 6.0))
def test_solve_spd_recovers_solution_up_to_condition_1e6(seed, p, log_cond):
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((p, p)))
    a = (q * np.logspace(0.0, log_cond, p)) @ q.T
    a = 0.5 * (a + a.T)
    x0 = rng.standard_normal(p)
    x = solve_spd(a, a @ x0)
    assert np.linalg.norm(x - x0) <= 1e-6 * np.linalg.norm(x0)


def test_solve_spd_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        solve_spd(np.eye(3), np.ones(2))


class TestSymEigDesc:
    def test_diagonal_order_and_vectors(self):
        pairs = sym_eig_desc(np.diag([1.0, 3.0, 2.0]))
        np.testing.assert_allclose(pairs.eigenvalues, [3.0, 2.0, 1.0])
        np.testing.assert_allclose(pairs.eigenvectors, np.eye(3)[:, [1, 2, 0]], atol=1e-12)

    def test_reconstruction_and_signs(self):
        a = _spd(5, 6)
        pairs = sym_eig_desc(a)
        vectors = pairs.eigenvectors
        np.testing.assert_allclose(vectors @ np.diag(pairs.eigenvalues) @ vectors.T, a, atol=1e-9)
        np.testing.assert_allclose(vectors.T @ vectors, np.eye(6), atol=1e-10)
        assert np.all(np.diff(pairs.eigenvalues) <= 0)
        pivots = np.argmax(np.abs(vectors), axis=0)
        assert np.all(vectors[pivots, np.arange(6)] > 0)

    def test_rejects_asymmetric(self):
        with pytest.raises(NotSymmetric):
            sym_eig_desc(np.array([[1.0, 0.5], [0.0, 1.0]]))


def test_sign_convention_breaks_ties_at_lowest_index():
    flipped = apply_sign_convention(np.array([[-1.0], [1.0]]))
    np.testing.assert_array_equal(flipped, [[1.0], [-1.0]])


class TestGramSchmidt:
    def test_orthonormal_with_same_span(self):
        rng = np.random.default_rng(8)
        columns = rng.standard_normal((7, 3))
        basis = gram_schmidt(columns)
        np.testing.assert_allclose(basis.T @ basis, np.eye(3), atol=1e-12)
        np.testing.assert_allclose(projection(basis) @ columns, columns, atol=1e-10)

    def test_dependent_columns(self):
        columns = np.array([[1.0, 2.0], [1.0, 2.0], [0.0, 0.0]])
        with pytest.raises(RankDeficient):
            gram_schmidt(columns)

    def test_too_many_columns(self):
        with pytest.raises(RankDeficient):
            gram_schmidt(np.eye(2, 3))


def test_projection_is_idempotent():
    basis = gram_schmidt(np.random.default_rng(2).standard_normal((5, 2)))
    proj = projection(basis)
    np.testing.assert_allclose(proj @ proj, proj, atol=1e-12)
    assert np.isclose(np.trace(proj), 2.0)
