import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import ortho_group

from psrfr.errors import ConfigInvalid, DegenerateSpectrum, InsufficientRows, LengthMismatch, TooFewRows
from psrfr.estimators import (
    METHODS,
    fit_method,
    ols_direction,
    phd_fit,
    psrfr_fit,
    psrfr_kernel,
    save_fit,
    sir_fit,
    slice_indices,
)
from psrfr.metrics import trace_correlation
from psrfr.numerics import projection


def _brute_force_kernel(x, y):
    """Element-wise K = S^-1 (z'z / n) S^-1 with z_jl = (x_jl - mean_l) * y_j."""
    n, p = x.shape
    mean = [sum(x[j, l] for j in range(n)) / n for l in range(p)]
    cov = np.array(
        [[sum((x[j, a] - mean[a]) * (x[j, b] - mean[b]) for j in range(n)) / (n - 1) for b in range(p)] for a in range(p)]
    )
    z = np.array([[(x[j, l] - mean[l]) * y[j] for l in range(p)] for j in range(n)])
    middle = np.array([[sum(z[j, a] * z[j, b] for j in range(n)) / n for b in range(p)] for a in range(p)])
    inverse = np.linalg.inv(cov)
    return inverse @ middle @ inverse


@pytest.mark.parametrize("seed", range(50))
def test_kernel_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    p = int(rng.integers(1, 9))
    n = int(rng.integers(p + 5, 51))
    x = rng.standard_normal((n, p)) * rng.uniform(0.5, 2.0, size=p)
    y = rng.standard_normal(n) + x[:, 0]
    oracle = _brute_force_kernel(x, y)
    z_hat = psrfr_kernel(x, y).z_hat
    np.testing.assert_allclose(z_hat, oracle, rtol=1e-8, atol=1e-10 * max(1.0, np.abs(oracle).max()))


def test_kernel_is_symmetric_psd(n5_sample):
    kernel = psrfr_kernel(n5_sample.predictors, n5_sample.response)
    z_hat = kernel.z_hat
    assert kernel.z_rows.shape == (400, 10)
    np.testing.assert_allclose(z_hat, z_hat.T, atol=1e-12)
    values = np.linalg.eigvalsh(z_hat)
    assert values.min() >= -1e-8 * values.max()


@pytest.mark.parametrize("method", ["psrfr", "phd", "sir", "save"])
def test_estimate_shape_and_orthonormality(method, n5_sample):
    estimate = fit_method(method, n5_sample.predictors, n5_sample.response, 2)
    assert estimate.method == method
    assert estimate.basis.shape == (10, 2)
    assert estimate.eigenvalues.shape == (10,)
    np.testing.assert_allclose(estimate.basis.T @ estimate.basis, np.eye(2), atol=1e-10)
    assert np.all(np.diff(estimate.eigenvalues) <= 1e-12)


def test_psrfr_recovers_n5_subspace(n5_sample):
    estimate = psrfr_fit(n5_sample.predictors, n5_sample.response, 2)
    assert trace_correlation(n5_sample.truth.true_basis, estimate.basis) > 0.9
    np.testing.assert_allclose(estimate.proportions().sum(), 1.0, atol=1e-10)


def test_psrfr_recovers_noiseless_n5_span_in_large_samples(make_sample):
    labeled = make_sample("n5", 5000, seed=21, sigma_noise=0.0)
    estimate = psrfr_fit(labeled.predictors, labeled.response, 2)
    assert trace_correlation(labeled.truth.true_basis, estimate.basis) > 0.99


@settings(max_examples=25)
@given(scale=st.floats(0.01, 100.0) | st.floats(-100.0, -0.01))
def test_psrfr_is_invariant_to_response_scaling(n5_sample, scale):
    x, y = n5_sample.predictors, n5_sample.response
    base = psrfr_fit(x, y, 2).basis
    scaled = psrfr_fit(x, scale * y, 2).basis
    np.testing.assert_allclose(projection(scaled), projection(base), atol=1e-9)


@pytest.mark.parametrize("method", ["psrfr", "phd", "sir", "save"])
@settings(max_examples=25)
@given(seed=st.integers(0, 2**32 - 1))
def test_orthogonal_equivariance(method, n5_sample, seed):
    q = ortho_group.rvs(10, random_state=seed)
    x, y = n5_sample.predictors.values, n5_sample.response
    base = fit_method(method, x, y, 2).basis
    rotated = fit_method(method, x @ q, y, 2).basis
    np.testing.assert_allclose(projection(rotated), q.T @ projection(base) @ q, atol=1e-8)


def test_psrfr_errors():
    x = np.random.default_rng(0).standard_normal((30, 4))
    with pytest.raises(DegenerateSpectrum):
        psrfr_fit(x, np.zeros(30), 1)
    with pytest.raises(InsufficientRows):
        psrfr_fit(x[:4], np.ones(4), 1)
    with pytest.raises(ConfigInvalid):
        psrfr_fit(x, np.ones(30), 0)
    with pytest.raises(ConfigInvalid):
        psrfr_fit(x, np.ones(30), 5)
    with pytest.raises(LengthMismatch):
        psrfr_fit(x, np.ones(29), 1)


class TestOls:
    def test_linear_link(self):
        rng = np.random.default_rng(4)
        x = rng.standard_normal((10_000, 5))
        estimate = ols_direction(x, x[:, 0])
        assert estimate.k == 1
        assert abs(estimate.basis[0, 0]) > 0.99
        assert estimate.eigenvalues[0] > 0 and np.all(estimate.eigenvalues[1:] == 0)

    def test_constant_response(self):
        x = np.random.default_rng(4).standard_normal((50, 3))
        with pytest.raises(DegenerateSpectrum):
            ols_direction(x, np.full(50, 2.0))

    def test_symmetric_quadratic_has_small_moment(self):
        rng = np.random.default_rng(6)
        x = rng.standard_normal((20_000, 3))
        try:
            estimate = ols_direction(x, x[:, 0] ** 2)
        except DegenerateSpectrum:
            return
        assert estimate.eigenvalues[0] < 1e-2


class TestPhd:
    def test_quadratic_link(self):
        rng = np.random.default_rng(7)
        x = rng.standard_normal((3_000, 5))
        estimate = phd_fit(x, x[:, 1] ** 2 + 0.1 * rng.standard_normal(3_000), 1)
        assert abs(estimate.basis[1, 0]) > 0.95

    def test_null_response(self):
        x = np.random.default_rng(7).standard_normal((40, 3))
        with pytest.raises(DegenerateSpectrum):
            phd_fit(x, np.ones(40), 1)


class TestSlicing:
    def test_slice_sizes(self):
        groups = slice_indices(np.arange(23.0)[::-1], 10)
        assert [g.size for g in groups] == [3, 3, 3, 2, 2, 2, 2, 2, 2, 2]
        np.testing.assert_array_equal(np.concatenate(groups), np.arange(23)[::-1])

    def test_stable_ties(self):
        groups = slice_indices(np.zeros(6), 3)
        np.testing.assert_array_equal(np.concatenate(groups), np.arange(6))

    def test_too_few_rows(self):
        with pytest.raises(TooFewRows):
            slice_indices(np.arange(19.0), 10)

    def test_nonpositive_slices(self):
        with pytest.raises(ConfigInvalid):
            slice_indices(np.arange(10.0), 0)

    def test_sir_linear_link(self):
        rng = np.random.default_rng(9)
        x = rng.standard_normal((2_000, 6))
        estimate = sir_fit(x, x[:, 2] + 0.1 * rng.standard_normal(2_000), 1)
        assert abs(estimate.basis[2, 0]) > 0.95

    def test_save_sees_symmetric_link_that_sir_misses(self):
        rng = np.random.default_rng(10)
        x = rng.standard_normal((2_000, 6))
        y = x[:, 3] ** 2 + 0.1 * rng.standard_normal(2_000)
        save_weight = abs(save_fit(x, y, 1).basis[3, 0])
        assert save_weight > 0.95
        assert abs(sir_fit(x, y, 1).basis[3, 0]) < save_weight

    def test_single_slice_sir_has_flat_spectrum(self):
        rng = np.random.default_rng(12)
        x = rng.standard_normal((100, 3))
        estimate = sir_fit(x, rng.standard_normal(100), 1, slices=1)
        np.testing.assert_allclose(estimate.eigenvalues, 0.0, atol=1e-12)

    def test_constant_response(self):
        x = np.random.default_rng(1).standard_normal((40, 3))
        with pytest.raises(DegenerateSpectrum):
            save_fit(x, np.zeros(40), 1)


def test_fit_method_dispatch(n5_sample):
    for method in METHODS:
        k = 1 if method == "ols" else 2
        assert fit_method(method, n5_sample.predictors, n5_sample.response, k).method == method
    with pytest.raises(ConfigInvalid):
        fit_method("mave", n5_sample.predictors, n5_sample.response, 2)
