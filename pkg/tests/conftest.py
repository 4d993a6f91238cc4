import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    max_examples=80,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def log_uniform_vector(rng, n, decades=3.0):
    """Entries spread log-uniformly over [10**-decades, 10**decades]."""
    return list(np.exp(rng.uniform(-decades, decades, n) * np.log(10.0)))
