import logging
from typing import Mapping

import numpy as np

from .models import InfluenceRanking
from ..core.models import InfluenceTensor
from ..exceptions import DataError

_log = logging.getLogger(__name__)


def rank_entities(tensor: InfluenceTensor, weight: str = 'lag') -> InfluenceRanking:
    """Sum of weighted influence exerted and received by every entity of the tensor.

    With the default weight an edge counts its lag, so long-term influencers weigh more than immediate ones.
    """
    ids = tensor.entities
    index = {entity: i for i, entity in enumerate(ids)}
    weights = tensor.weights(weight)
    src_rows = np.array([index[s] for s in tensor.sources], dtype=int)
    dst_rows = np.array([index[t] for t in tensor.targets], dtype=int)

    exerted = np.zeros(len(ids))
    received = np.zeros(len(ids))
    per_context = np.zeros((len(ids), len(tensor.contexts)))
    np.add.at(exerted, src_rows, weights.sum(axis=(1, 2)))
    np.add.at(received, dst_rows, weights.sum(axis=(0, 2)))
    np.add.at(per_context, src_rows, weights.sum(axis=1))
    _log.debug(f'Ranked {len(ids)} entities over {tensor.nonzero()} edges.')
    return InfluenceRanking(ids=tuple(ids), exerted=exerted, received=received, contexts=tensor.contexts,
                            per_context=per_context)


def aggregate_ranking(ranking: InfluenceRanking, groups: Mapping[str, str]) -> InfluenceRanking:
    """Sum scores over groups of entities, e.g. cities into countries."""
    missing = [i for i in ranking.ids if i not in groups]
    if missing:
        raise DataError(f'No group given for {", ".join(missing[:10])}.')
    names = sorted(set(groups[i] for i in ranking.ids))
    index = {name: g for g, name in enumerate(names)}
    rows = np.array([index[groups[i]] for i in ranking.ids], dtype=int)
    exerted, received = np.zeros(len(names)), np.zeros(len(names))
    per_context = np.zeros((len(names), len(ranking.contexts)))
    np.add.at(exerted, rows, ranking.exerted)
    np.add.at(received, rows, ranking.received)
    if ranking.per_context.size:
        np.add.at(per_context, rows, ranking.per_context)
    return InfluenceRanking(ids=tuple(names), exerted=exerted, received=received, contexts=ranking.contexts,
                            per_context=per_context)
