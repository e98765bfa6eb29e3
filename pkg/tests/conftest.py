import os
from pathlib import Path

import hypothesis
import numpy as np
import pytest

from psrfr.distributions import DistributionSpec, SeededStream, sample
from psrfr.models import covariance_for, default_spec, generate

hypothesis.settings.register_profile("default", max_examples=100, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


def labeled_sample(model_id, n, seed, scenario="norm_p10", sigma_noise=None):
    spec = DistributionSpec.normal(covariance_for(scenario))
    predictors = sample(spec, n, SeededStream(seed, 0))
    noise = SeededStream(seed, 1).generator().standard_normal(n)
    return generate(default_spec(model_id, spec.p, sigma_noise), predictors, noise)


@pytest.fixture
def make_sample():
    return labeled_sample


@pytest.fixture(scope="session")
def n5_sample():
    return labeled_sample("n5", 400, seed=11)


@pytest.fixture
def wine_dir():
    return Path(os.getenv("WINE_DATA_DIR", "data"))
