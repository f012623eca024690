import logging
from typing import Optional

import numpy as np

from .models import InfluenceDynamics
from .ranking import rank_entities
from ..exceptions import DataError
from ..influence.config import InfluenceConfig
from ..influence.tensor import build_influence_tensor
from ..ingest.models import TrajectorySet
from ..parallel import ordered_map

_log = logging.getLogger(__name__)


def influence_dynamics(ts: TrajectorySet, window: int = 78, stride: int = 13, axis: str = 'unit',
                       config: Optional[InfluenceConfig] = None, jobs: int = 1) -> InfluenceDynamics:
    """Exerted influence of every entity on sliding windows of the whole series.

    Windows start every ``stride`` buckets and span ``window`` buckets; each is tested and ranked on its own.
    """
    config = config or InfluenceConfig()
    if window < 2 or stride < 1:
        raise DataError(f'Invalid window {window} / stride {stride}.')
    if ts.length < window:
        raise DataError(f'A series of length {ts.length} is shorter than the {window}-step window.')
    starts = list(range(0, ts.length - window + 1, stride))

    def score(start: int) -> dict:
        tensor = build_influence_tensor(ts.window(start, start + window), axis, config)
        return rank_entities(tensor, config.weight).scores('exerted')

    per_window = ordered_map(score, starts, jobs)
    ids = ts.units if axis == 'unit' else ts.styles
    scores = np.array([[s[i] for i in ids] for s in per_window])
    _log.info(f'Computed influence dynamics over {len(starts)} windows of {window} steps.')
    return InfluenceDynamics(window_starts=tuple(ts.t0 + s for s in starts), ids=tuple(ids), scores=scores,
                             window=window, stride=stride)
