from typing import Callable, Optional, Sequence

import numpy as np
import pytest

from trendsetter.core.models import Split
from trendsetter.ingest.models import TrajectorySet
from trendsetter.styles.models import StyleModel
from trendsetter.synth import PlantedEdge, SynthConfig, generate


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def make_set() -> Callable[..., TrajectorySet]:
    """Build a TrajectorySet from a (styles, units, T) array with generated ids."""
    def factory(values, validation: Optional[int] = None, test: Optional[int] = None,
                styles: Optional[Sequence[str]] = None, units: Optional[Sequence[str]] = None) -> TrajectorySet:
        values = np.asarray(values, dtype=float)
        n_styles, n_units, length = values.shape
        split = None
        if validation is not None and test is not None:
            split = Split.from_sizes(length, validation, test)
        return TrajectorySet(styles=tuple(styles or [f'S{i}' for i in range(n_styles)]),
                             units=tuple(units or [f'U{i}' for i in range(n_units)]), values=values, split=split)
    return factory


@pytest.fixture
def identity_styles() -> StyleModel:
    """Two styles whose posterior for a probability vector [a, b] is [a, b] itself."""
    return StyleModel(kind='nmf', k=2, m=2, components=np.eye(2))


@pytest.fixture(scope='session')
def planted() -> SynthConfig:
    """Four units over two styles; U0 drives U1 at lag 2 in style S0."""
    return SynthConfig(units=4, styles=2, T=200, noise_std=0.05, seed=3,
                       planted_edges=[PlantedEdge(src='U0', dst='U1', context='S0', lag=2, coefficient=0.9)])


@pytest.fixture(scope='session')
def planted_data(planted):
    return generate(planted)

