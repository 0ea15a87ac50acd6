import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture
def random_image(rng):
    def make(height=48, width=48, channels=3, low=0.0, high=255.0):
        return rng.uniform(low, high, (height, width, channels))

    return make


@pytest.fixture
def u8_image(rng):
    def make(height=48, width=48):
        return rng.integers(0, 256, (height, width, 3)).astype(np.float64)

    return make
