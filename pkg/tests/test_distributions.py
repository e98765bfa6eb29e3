import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats
from scipy.stats import ortho_group

from psrfr.distributions import (
    DistributionSpec,
    SeededStream,
    covariance_scale,
    describe,
    power_exponential_scale,
    sample,
    sample_mixture,
    sample_normal,
)
from psrfr.errors import ConfigInvalid, NotPositiveDefinite, ShapeMismatch

SIGMA3 = np.diag([1.0, 2.0, 3.0])


def _mahalanobis_squared(values, sigma):
    return np.sum(values * np.linalg.solve(sigma, values.T).T, axis=1)


LAWS = [
    DistributionSpec.normal(SIGMA3),
    DistributionSpec.student_t(SIGMA3, 3.0),
    DistributionSpec.power_exponential(SIGMA3, 0.5),
    DistributionSpec.mixture(SIGMA3),
]


@pytest.mark.parametrize("spec", LAWS, ids=describe)
@given(seed=st.integers(0, 2**64 - 1), stream_id=st.integers(0, 2**20))
def test_sampling_is_bit_exact_per_stream(spec, seed, stream_id):
    first = sample(spec, 25, SeededStream(seed, stream_id)).values
    second = sample(spec, 25, SeededStream(seed, stream_id)).values
    np.testing.assert_array_equal(first, second)


def test_streams_are_distinct():
    spec = DistributionSpec.normal(SIGMA3)
    a = sample(spec, 10, SeededStream(1, 0)).values
    b = sample(spec, 10, SeededStream(1, 1)).values
    assert not np.array_equal(a, b)


def test_normal_covariance():
    spec = DistributionSpec.normal(SIGMA3, mu=[1.0, -1.0, 0.0])
    draws = sample(spec, 100_000, SeededStream(5, 0)).values
    np.testing.assert_allclose(draws.mean(axis=0), [1.0, -1.0, 0.0], atol=0.03)
    np.testing.assert_allclose(np.cov(draws, rowvar=False), SIGMA3, atol=0.06)


def test_student_t_covariance_scales_by_nu_over_nu_minus_two():
    draws = sample(DistributionSpec.student_t(SIGMA3, 3.0), 200_000, SeededStream(20240601, 0)).values
    empirical = np.cov(draws, rowvar=False)
    np.testing.assert_allclose(np.diag(empirical), 3.0 * np.diag(SIGMA3), rtol=0.10)
    off = empirical - np.diag(np.diag(empirical))
    assert np.max(np.abs(off)) < 0.1 * 3.0 * np.max(SIGMA3)


def test_cauchy_draws_are_heavy_tailed():
    draws = sample(DistributionSpec.student_t(np.eye(2), 1.0), 10_000, SeededStream(3, 0)).values
    assert np.max(np.abs(draws)) > 100.0


def test_power_exponential_beta_one_is_normal():
    p = 3
    spec = DistributionSpec.power_exponential(SIGMA3, 1.0)
    draws = sample(spec, 20_000, SeededStream(17, 0)).values
    radii = _mahalanobis_squared(draws, SIGMA3)
    assert stats.kstest(radii, "chi2", args=(p,)).pvalue > 1e-3
    marginal = draws[:, 0] / np.sqrt(SIGMA3[0, 0])
    assert stats.kstest(marginal, "norm").pvalue > 1e-3


@pytest.mark.parametrize("beta", [0.5, 5.0])
def test_power_exponential_covariance(beta):
    spec = DistributionSpec.power_exponential(SIGMA3, beta)
    draws = sample(spec, 100_000, SeededStream(23, 0)).values
    expected = power_exponential_scale(3, beta) * np.diag(SIGMA3)
    np.testing.assert_allclose(np.diag(np.cov(draws, rowvar=False)), expected, rtol=0.06)


def test_power_exponential_scale_is_one_at_beta_one():
    assert power_exponential_scale(10, 1.0) == pytest.approx(1.0)


def test_covariance_scale_by_law():
    assert covariance_scale(DistributionSpec.normal(SIGMA3)) == 1.0
    assert covariance_scale(DistributionSpec.student_t(SIGMA3, 3.0)) == pytest.approx(3.0)
    assert covariance_scale(DistributionSpec.student_t(SIGMA3, 1.0)) is None
    assert covariance_scale(DistributionSpec.power_exponential(SIGMA3, 0.5)) == pytest.approx(
        power_exponential_scale(3, 0.5)
    )
    assert covariance_scale(DistributionSpec.mixture(SIGMA3)) is None


def test_power_exponential_light_tails_at_large_beta():
    draws = sample(DistributionSpec.power_exponential(np.eye(3), 5.0), 50_000, SeededStream(2, 0)).values
    assert stats.kurtosis(draws[:, 0]) < 0.0


def test_power_exponential_small_beta_has_heavy_marginals():
    draws = sample(DistributionSpec.power_exponential(np.eye(10), 0.5), 200_000, SeededStream(29, 0)).values
    assert np.all(stats.kurtosis(draws, axis=0) > 0.0)


@pytest.mark.parametrize(
    "spec",
    [
        DistributionSpec.normal(np.eye(3)),
        DistributionSpec.student_t(np.eye(3), 1.0),
        DistributionSpec.power_exponential(np.eye(3), 0.5),
        DistributionSpec.power_exponential(np.eye(3), 5.0),
        DistributionSpec.mixture(np.eye(3)),
    ],
    ids=describe,
)
def test_centered_laws_have_zero_medians(spec):
    draws = sample(spec, 200_000, SeededStream(31, 0)).values
    np.testing.assert_allclose(np.median(draws, axis=0), 0.0, atol=0.05)


@pytest.mark.parametrize(
    "spec",
    [
        DistributionSpec.normal(np.eye(4)),
        DistributionSpec.student_t(np.eye(4), 3.0),
        DistributionSpec.power_exponential(np.eye(4), 5.0),
    ],
    ids=describe,
)
def test_rotated_marginal_matches_original(spec):
    draws = sample(spec, 100_000, SeededStream(37, 0)).values
    rotated = draws @ ortho_group.rvs(4, random_state=37)
    assert stats.ks_2samp(draws[:, 0], rotated[:, 0]).statistic < 0.02


def test_mixture_marginal_variance():
    spec = DistributionSpec.mixture(np.diag(np.arange(1.0, 11.0)), weight=0.8, halfwidth=3.0)
    draws = sample(spec, 200_000, SeededStream(41, 0)).values
    assert draws[:, 0].var(ddof=1) == pytest.approx(1.4, rel=0.05)


def test_mixture_with_full_weight_equals_normal():
    normal = sample_normal(DistributionSpec.normal(SIGMA3), 200, SeededStream(9, 4)).values
    mixed = sample_mixture(DistributionSpec.mixture(SIGMA3, weight=1.0), 200, SeededStream(9, 4)).values
    np.testing.assert_array_equal(normal, mixed)


def test_mixture_with_zero_weight_is_uniform():
    draws = sample(DistributionSpec.mixture(SIGMA3, weight=0.0, halfwidth=2.0), 5_000, SeededStream(9, 0)).values
    assert np.all(np.abs(draws) <= 2.0)
    np.testing.assert_allclose(draws.var(axis=0), 4.0 / 3.0, rtol=0.08)


class TestSpecValidation:
    def test_nonpositive_nu(self):
        with pytest.raises(ConfigInvalid):
            DistributionSpec.student_t(SIGMA3, 0.0)

    def test_nonpositive_beta(self):
        with pytest.raises(ConfigInvalid):
            DistributionSpec.power_exponential(SIGMA3, -1.0)

    def test_mixture_weight_range(self):
        with pytest.raises(ConfigInvalid):
            DistributionSpec.mixture(SIGMA3, weight=1.5)

    def test_indefinite_sigma(self):
        with pytest.raises(NotPositiveDefinite):
            DistributionSpec.normal(np.array([[1.0, 2.0], [2.0, 1.0]]))

    def test_location_length(self):
        with pytest.raises(ShapeMismatch):
            DistributionSpec.normal(SIGMA3, mu=[0.0, 0.0])

    def test_seed_must_be_unsigned(self):
        with pytest.raises(ConfigInvalid):
            SeededStream(-1, 0)

    def test_sampler_kind_must_match(self):
        with pytest.raises(ConfigInvalid):
            sample_normal(DistributionSpec.student_t(SIGMA3, 3.0), 10, SeededStream(1, 0))
