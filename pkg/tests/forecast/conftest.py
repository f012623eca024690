import numpy as np
import pytest

from trendsetter.forecast import ForecastConfig
from tests.helpers import ar1


@pytest.fixture
def small_set(make_set):
    """Two styles x three units of AR(1) series around 0.5, with a 4-step validation and 10-step test region."""
    rng = np.random.default_rng(77)
    values = np.stack([np.stack([0.5 + 0.05 * ar1(rng, 80, phi=0.8) for _ in range(3)]) for _ in range(2)])
    return make_set(values, validation=4, test=10)


@pytest.fixture
def quick() -> ForecastConfig:
    return ForecastConfig(order=2, hidden=4, max_epochs=30, patience=10, batch_size=16, seed=5)
