from typing import Dict, Mapping

import numpy as np

from ..core.models import TrajectoryKey
from ..exceptions import DataError, NumericalError

#: Forecast values per trajectory, each of length ``horizon``.
Forecasts = Dict[TrajectoryKey, np.ndarray]


class TrainingDivergedError(NumericalError):
    """Training produced a non-finite loss twice in a row."""
    pass


class UntrainedForecasterError(DataError):
    """A forecaster was used before it was trained."""
    pass


class SeriesTooShortError(DataError):
    pass


def stack(forecasts: Mapping[TrajectoryKey, np.ndarray]) -> np.ndarray:
    return np.stack([np.asarray(v, dtype=float) for v in forecasts.values()])
