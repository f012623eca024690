import logging
from pathlib import Path
from typing import Dict

import numpy as np
import pandas as pd

from .models import InfluenceDynamics, InfluenceRanking
from ..exceptions import DataError

_log = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'


def write_ranking(ranking: InfluenceRanking, path: Path) -> None:
    frame = pd.DataFrame({'id': ranking.ids, 'exerted': ranking.exerted, 'received': ranking.received,
                          'net': ranking.net})
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    _log.info(f'Wrote ranking of {len(ranking)} entities to {path}.')


def read_ranking(path: Path) -> InfluenceRanking:
    frame = pd.read_csv(path, dtype={'id': str})
    if not {'id', 'exerted', 'received'} <= set(frame.columns):
        raise DataError(f'{path}: ranking CSV needs id, exerted and received columns.')
    return InfluenceRanking(ids=tuple(frame['id']), exerted=frame['exerted'].to_numpy(dtype=float),
                            received=frame['received'].to_numpy(dtype=float))


def write_dynamics(dynamics: InfluenceDynamics, path: Path) -> None:
    """Long format ``window_start,id,score``."""
    starts = np.repeat(dynamics.window_starts, len(dynamics.ids))
    ids = np.tile(np.asarray(dynamics.ids, dtype=object), len(dynamics.window_starts))
    frame = pd.DataFrame({'window_start': starts, 'id': ids, 'score': dynamics.scores.ravel()})
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    _log.info(f'Wrote influence dynamics over {len(dynamics.window_starts)} windows to {path}.')


def _two_columns(path: Path, key: str, value: str) -> pd.DataFrame:
    frame = pd.read_csv(path, dtype={key: str})
    if key not in frame or value not in frame:
        raise DataError(f'{path}: expected columns {key},{value}.')
    if frame[key].duplicated().any():
        raise DataError(f'{path}: duplicate ids.')
    return frame


def read_metadata(path: Path) -> Dict[str, float]:
    """Metadata CSV ``id,value``."""
    frame = _two_columns(path, 'id', 'value')
    return dict(zip(frame['id'], frame['value'].astype(float)))


def read_groups(path: Path) -> Dict[str, str]:
    """Grouping CSV ``id,group``."""
    frame = _two_columns(path, 'id', 'group')
    return dict(zip(frame['id'], frame['group'].astype(str)))
