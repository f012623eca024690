import logging
from typing import Optional, Sequence

import numpy as np

from .models import TrajectorySet
from ..core.models import GLOBAL_UNIT, EventLog, Split, StyleId, Trajectory
from ..exceptions import DataError
from ..styles.models import StyleModel

_log = logging.getLogger(__name__)


class UnknownUnitError(DataError):
    """An event refers to a unit that is not in the unit table."""
    pass


def style_labels(k: int) -> Sequence[StyleId]:
    return [f'S{i}' for i in range(k)]


def build_trajectories(events: EventLog, style_model: StyleModel, units: Optional[Sequence[str]] = None,
                       styles: Optional[Sequence[StyleId]] = None, resolution: str = 'week') -> TrajectorySet:
    """Popularity of every style in every unit per time bucket: the mean style posterior of the bucket's events.

    Buckets without events carry the last observed value forward; leading empty buckets take the first observed
    value. Time is re-indexed so the earliest bucket in the data becomes t = 0.
    """
    if len(events) == 0:
        raise DataError('The event set is empty.')
    if events.m != style_model.m:
        raise DataError(f'Events have {events.m} attributes but the style model expects {style_model.m}.')
    styles = list(styles or style_labels(style_model.k))
    if len(styles) != style_model.k:
        raise DataError(f'Got {len(styles)} style labels for a model with {style_model.k} styles.')

    unit_table = sorted(set(events.units)) if units is None else list(units)
    lookup = {unit: i for i, unit in enumerate(unit_table)}
    unknown = sorted(set(events.units) - set(lookup))
    if unknown:
        raise UnknownUnitError(f'Events refer to units missing from the unit table: {", ".join(unknown[:10])}.')

    posteriors = style_model.posterior_matrix(events.attrs)
    unit_ix = np.array([lookup[u] for u in events.units], dtype=np.int64)
    t0 = int(events.t.min())
    t_ix = events.t - t0
    length = int(t_ix.max()) + 1

    # Accumulate in a canonical order so the sums do not depend on how the events were listed.
    order = np.lexsort(tuple(posteriors.T[::-1]) + (t_ix, unit_ix))
    unit_ix, t_ix, posteriors = unit_ix[order], t_ix[order], posteriors[order]

    sums = np.zeros((len(unit_table), length, style_model.k))
    counts = np.zeros((len(unit_table), length))
    np.add.at(sums, (unit_ix, t_ix), posteriors)
    np.add.at(counts, (unit_ix, t_ix), 1.0)

    values = np.empty((style_model.k, len(unit_table), length))
    for j, unit in enumerate(unit_table):
        observed = np.flatnonzero(counts[j])
        if observed.size == 0:
            raise DataError(f'Unit {unit} has no events.')
        means = sums[j, observed] / counts[j, observed][:, None]
        # Index of the latest observed bucket at or before every t, or the first one for leading gaps.
        latest = np.searchsorted(observed, np.arange(length), side='right') - 1
        values[:, j, :] = means[np.maximum(latest, 0)].T
        gaps = length - observed.size
        if gaps:
            _log.debug(f'Unit {unit}: filled {gaps} of {length} empty buckets.')

    _log.info(f'Built {style_model.k} x {len(unit_table)} trajectories of length {length} from {len(events)} events.')
    return TrajectorySet(styles=tuple(styles), units=tuple(unit_table), values=np.clip(values, 0.0, 1.0),
                         resolution=resolution, t0=t0)


def deseasonalize(traj: Trajectory, period: int = 52) -> Trajectory:
    """Subtract the value one season earlier; the first ``period`` buckets are dropped."""
    if len(traj) <= period:
        raise DataError(f'Cannot deseasonalize a series of length {len(traj)} with period {period}.')
    values = traj.values[period:] - traj.values[:-period]
    split = None
    if traj.split is not None:
        split = Split.from_sizes(len(values), traj.split.validation, traj.split.test)
    return traj.with_values(values, split)


def deseasonalize_set(ts: TrajectorySet, period: int = 52) -> TrajectorySet:
    if ts.length <= period:
        raise DataError(f'Cannot deseasonalize series of length {ts.length} with period {period}.')
    values = ts.values[:, :, period:] - ts.values[:, :, :-period]
    split = None
    if ts.split is not None:
        split = Split.from_sizes(values.shape[2], ts.split.validation, ts.split.test)
    _log.info(f'Deseasonalized {len(ts.styles) * len(ts.units)} trajectories with period {period}.')
    return TrajectorySet(styles=ts.styles, units=ts.units, values=values, split=split,
                         resolution=ts.resolution, t0=ts.t0 + period)


def global_trend(ts: TrajectorySet, style: StyleId) -> Trajectory:
    """Unweighted mean of a style's trajectories over all units."""
    return Trajectory(style=style, unit=GLOBAL_UNIT, values=ts.style_block(style).mean(axis=0), split=ts.split)


def apply_split(ts: TrajectorySet, validation: int = 4, test: int = 26, max_lag: int = 0) -> TrajectorySet:
    """Stamp train / validation / test boundaries on every trajectory; values are untouched."""
    split = Split.from_sizes(ts.length, validation, test, max_lag)
    _log.debug(f'Split {ts.length} buckets at train_end={split.train_end}, val_end={split.val_end}.')
    return ts.with_split(split)
