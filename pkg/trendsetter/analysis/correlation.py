import logging
from typing import Mapping, Optional, Sequence

import numpy as np
from scipy.stats import rankdata

from .models import DegenerateCorrelationError, InfluenceRanking, MissingMetadataError
from ..core.models import InfluenceTensor
from ..exceptions import DataError

_log = logging.getLogger(__name__)

MODES = ('world_rank', 'direction')


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    a = a - a.mean()
    b = b - b.mean()
    denominator = np.sqrt((a @ a) * (b @ b))
    if denominator == 0:
        raise DegenerateCorrelationError('Correlation is undefined for a constant sequence.')
    return float(np.clip((a @ b) / denominator, -1.0, 1.0))


def spearman_scores(a: Sequence[float], b: Sequence[float]) -> float:
    """Spearman's rho of two score sequences; ties get their average rank."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if len(a) != len(b):
        raise DataError(f'Score sequences differ in length ({len(a)} vs {len(b)}).')
    if len(a) < 2:
        raise DegenerateCorrelationError('Rank correlation needs at least two items.')
    return _pearson(rankdata(a), rankdata(b))


def spearman(rank_a: Sequence[str], rank_b: Sequence[str]) -> float:
    """Spearman's rho of two orderings of the same ids (first = rank 1)."""
    if len(set(rank_a)) != len(rank_a) or len(set(rank_b)) != len(rank_b):
        raise DataError('Rankings contain duplicate ids.')
    if set(rank_a) != set(rank_b):
        missing = sorted(set(rank_a) ^ set(rank_b))
        raise DataError(f'Rankings cover different ids: {", ".join(missing[:10])}.')
    position = {item: i for i, item in enumerate(rank_b)}
    return spearman_scores(np.arange(len(rank_a)), [position[item] for item in rank_a])


def correlate_metadata(ranking: InfluenceRanking, metadata: Mapping[str, float], mode: str = 'world_rank',
                       tensor: Optional[InfluenceTensor] = None, score: str = 'exerted',
                       weight: str = 'lag') -> float:
    """Relate influence to an external per-entity value such as GDP or temperature.

    ``world_rank`` is Spearman's rho between an influence score and the value. ``direction`` asks whether influence
    flows from high to low values: for every entity, the correlation between its value minus each other entity's
    value and the influence it exerts on that entity, averaged over entities where it is defined.
    """
    if mode not in MODES:
        raise DataError(f'Unknown correlation mode "{mode}"; expected one of {", ".join(MODES)}.')
    missing = [i for i in ranking.ids if i not in metadata]
    if missing:
        raise MissingMetadataError(f'No metadata for {", ".join(missing[:10])}.')
    if mode == 'world_rank':
        scores = ranking.scores(score)
        return spearman_scores([scores[i] for i in ranking.ids], [metadata[i] for i in ranking.ids])

    if tensor is None:
        raise DataError('Direction correlation needs the influence tensor.')
    if tensor.sources != tensor.targets:
        raise DataError(f'Direction correlation needs a square tensor, got axis {tensor.axis}.')
    entities = [e for e in tensor.sources if e in metadata]
    pair_weights = tensor.weights(weight).sum(axis=2)
    values = np.array([metadata[e] for e in entities], dtype=float)
    rows = [tensor.sources.index(e) for e in entities]
    correlations = []
    for n, e in enumerate(entities):
        others = [m for m in range(len(entities)) if m != n]
        difference = values[n] - values[others]
        exerted = pair_weights[rows[n], [rows[m] for m in others]]
        if np.ptp(difference) == 0 or np.ptp(exerted) == 0:
            continue
        correlations.append(_pearson(difference, exerted))
    if not correlations:
        raise DegenerateCorrelationError('No entity has both varying metadata differences and varying influence.')
    _log.debug(f'Direction correlation averaged over {len(correlations)} of {len(entities)} entities.')
    return float(np.mean(correlations))
