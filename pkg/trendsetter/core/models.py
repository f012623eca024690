import logging
from dataclasses import dataclass, field, replace
from datetime import datetime
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pytz
from pydantic import BaseModel, confloat, conint, root_validator, validator

from ..exceptions import DataError

_log = logging.getLogger(__name__)

UnitId = str
StyleId = str
TrajectoryKey = Tuple[StyleId, UnitId]

#: Label of the pseudo-unit holding a style's cross-unit mean trajectory.
GLOBAL_UNIT = 'global'
#: Longest influence lag a tensor may hold.
MAX_LAG = 8


class SplitError(DataError):
    """A series is too short for the requested split."""
    pass


def week_index(timestamp: datetime, epoch: datetime, timezone: str = 'UTC') -> int:
    """Number of whole weeks between ``epoch`` and ``timestamp``, both read in ``timezone`` when naive."""
    tz = pytz.timezone(timezone)
    if timestamp.tzinfo is None:
        timestamp = tz.localize(timestamp)
    if epoch.tzinfo is None:
        epoch = tz.localize(epoch)
    days = (timestamp - epoch).total_seconds() / 86400.0
    if days < 0:
        raise DataError(f'Timestamp {timestamp.isoformat()} is before the epoch {epoch.isoformat()}.')
    return int(days // 7)


def as_attribute_matrix(data, m: Optional[int] = None) -> np.ndarray:
    """Validate a set of attribute vectors and return them as an (n, M) float array."""
    matrix = np.atleast_2d(np.asarray(data, dtype=float))
    if matrix.ndim != 2 or matrix.size == 0:
        raise DataError('Attribute data must be a non-empty 2-d collection of vectors.')
    if m is not None and matrix.shape[1] != m:
        raise DataError(f'Attribute vectors have length {matrix.shape[1]}, expected {m}.')
    if not np.all(np.isfinite(matrix)):
        raise DataError('Attribute vectors contain non-finite values.')
    if matrix.min() < 0.0 or matrix.max() > 1.0:
        raise DataError('Attribute probabilities must lie in [0, 1].')
    return matrix


def _frozen(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


class EventRecord(BaseModel):
    """One observation: a photo or transaction of a unit at a time bucket."""
    unit: UnitId
    t: Optional[conint(ge=0)] = None  # type: ignore[valid-type]
    time: Optional[datetime] = None
    attrs: List[float]

    @validator('attrs')
    def probabilities(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError('attrs must not be empty')
        if any(not (0.0 <= a <= 1.0) for a in v):
            raise ValueError('attrs must be probabilities in [0, 1]')
        return v

    @root_validator(skip_on_failure=True)
    def one_time_field(cls, values: Dict) -> Dict:
        if (values.get('t') is None) == (values.get('time') is None):
            raise ValueError('exactly one of "t" or "time" must be given')
        return values

    def bucket(self, epoch: datetime, timezone: str = 'UTC') -> int:
        if self.t is not None:
            return self.t
        return week_index(self.time, epoch, timezone)  # type: ignore[arg-type]


@dataclass(frozen=True)
class EventLog:
    """Columnar view of a set of events with integer time buckets."""
    units: np.ndarray
    t: np.ndarray
    attrs: np.ndarray

    def __post_init__(self):
        units = np.asarray(self.units, dtype=object)
        t = np.asarray(self.t, dtype=np.int64)
        attrs = as_attribute_matrix(self.attrs)
        if not (len(units) == len(t) == len(attrs)):
            raise DataError('Event columns have different lengths.')
        if t.size and t.min() < 0:
            raise DataError('Time buckets must be non-negative.')
        object.__setattr__(self, 'units', _frozen(units))
        object.__setattr__(self, 't', _frozen(t))
        object.__setattr__(self, 'attrs', _frozen(attrs))

    @classmethod
    def from_records(cls, records: Iterable[EventRecord], epoch: datetime = datetime(2013, 1, 7),
                     timezone: str = 'UTC') -> 'EventLog':
        records = list(records)
        if not records:
            raise DataError('The event set is empty.')
        return cls(
            units=[r.unit for r in records],
            t=[r.bucket(epoch, timezone) for r in records],
            attrs=[r.attrs for r in records],
        )

    def __len__(self) -> int:
        return len(self.t)

    @property
    def m(self) -> int:
        return self.attrs.shape[1]

    def permuted(self, order: Sequence[int]) -> 'EventLog':
        order = np.asarray(order)
        return EventLog(units=self.units[order], t=self.t[order], attrs=self.attrs[order])


@dataclass(frozen=True)
class Split:
    """Boundaries of the train / validation / test regions of a series of ``length`` buckets."""
    train_end: int
    val_end: int
    length: int

    def __post_init__(self):
        if not 0 < self.train_end <= self.val_end <= self.length:
            raise SplitError(f'Invalid split boundaries {self.train_end}/{self.val_end}/{self.length}.')

    @classmethod
    def from_sizes(cls, length: int, validation: int = 4, test: int = 26, max_lag: int = 0) -> 'Split':
        if length < validation + test + max_lag + 1:
            raise SplitError(f'A series of length {length} is too short for {validation} validation and {test} '
                             f'test steps with lags up to {max_lag}.')
        return cls(train_end=length - validation - test, val_end=length - test, length=length)

    @property
    def validation(self) -> int:
        return self.val_end - self.train_end

    @property
    def test(self) -> int:
        return self.length - self.val_end


@dataclass(frozen=True)
class Trajectory:
    """Popularity sequence of one style in one unit, optionally with split boundaries."""
    style: StyleId
    unit: UnitId
    values: np.ndarray
    split: Optional[Split] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float).ravel()
        if not np.all(np.isfinite(values)):
            raise DataError(f'Trajectory ({self.style}, {self.unit}) has non-finite values.')
        if self.split is not None and self.split.length != len(values):
            raise SplitError(f'Split length {self.split.length} does not match trajectory length {len(values)}.')
        object.__setattr__(self, 'values', _frozen(values))

    def __len__(self) -> int:
        return len(self.values)

    @property
    def key(self) -> TrajectoryKey:
        return self.style, self.unit

    @property
    def history(self) -> np.ndarray:
        """Everything observed before the test region."""
        return self.values if self.split is None else self.values[:self.split.val_end]

    @property
    def train(self) -> np.ndarray:
        return self.values if self.split is None else self.values[:self.split.train_end]

    @property
    def validation(self) -> np.ndarray:
        if self.split is None:
            return self.values[:0]
        return self.values[self.split.train_end:self.split.val_end]

    @property
    def test(self) -> np.ndarray:
        return self.values[:0] if self.split is None else self.values[self.split.val_end:]

    def with_values(self, values, split: Optional[Split] = None) -> 'Trajectory':
        return replace(self, values=values, split=split)


class InfluenceEdge(BaseModel):
    """A significant Granger relation: ``src`` helps forecast ``dst`` within ``context`` at ``lag``."""
    src: str
    dst: str
    context: str
    lag: conint(ge=1, le=MAX_LAG)  # type: ignore[valid-type]
    p_value: confloat(gt=0.0, le=1.0)  # type: ignore[valid-type]
    delta_mse: confloat(ge=0.0)  # type: ignore[valid-type]

    class Config:
        allow_mutation = False


class GrangerFailure(BaseModel):
    """A Granger test that could not be run, kept on the tensor instead of aborting the build."""
    src: str
    dst: str
    context: str
    reason: str

    class Config:
        allow_mutation = False


@dataclass(frozen=True)
class InfluenceTensor:
    """Lag-valued influence tensor over (source, target, context); 0 means no influence.

    For unit influence the axes are units x units x styles, for style influence styles x styles x units,
    and for influence on the global trend units x [global] x styles.
    """
    axis: str
    sources: Tuple[str, ...]
    targets: Tuple[str, ...]
    contexts: Tuple[str, ...]
    lags: np.ndarray
    p_values: np.ndarray = field(default=None)  # type: ignore[assignment]
    delta_mse: np.ndarray = field(default=None)  # type: ignore[assignment]
    failures: Tuple[GrangerFailure, ...] = ()

    def __post_init__(self):
        shape = (len(self.sources), len(self.targets), len(self.contexts))
        lags = np.array(self.lags, dtype=np.int64).reshape(shape)
        p_values = np.full(shape, np.nan) if self.p_values is None else np.array(self.p_values, dtype=float)
        delta = np.full(shape, np.nan) if self.delta_mse is None else np.array(self.delta_mse, dtype=float)
        if p_values.shape != shape or delta.shape != shape:
            raise DataError('Influence statistics do not match the tensor shape.')
        if lags.min(initial=0) < 0 or lags.max(initial=0) > MAX_LAG:
            raise DataError(f'Influence lags must lie in 0..{MAX_LAG}, '
                            f'got {lags.min(initial=0)}..{lags.max(initial=0)}.')
        for i, src in enumerate(self.sources):
            for j, dst in enumerate(self.targets):
                if src == dst and lags[i, j].any():
                    raise DataError(f'Self influence of {src} is not allowed.')
        object.__setattr__(self, 'sources', tuple(self.sources))
        object.__setattr__(self, 'targets', tuple(self.targets))
        object.__setattr__(self, 'contexts', tuple(self.contexts))
        object.__setattr__(self, 'failures', tuple(self.failures))
        object.__setattr__(self, 'lags', _frozen(lags))
        object.__setattr__(self, 'p_values', _frozen(p_values))
        object.__setattr__(self, 'delta_mse', _frozen(delta))

    @classmethod
    def empty(cls, axis: str, sources: Sequence[str], targets: Sequence[str],
              contexts: Sequence[str]) -> 'InfluenceTensor':
        return cls(axis=axis, sources=tuple(sources), targets=tuple(targets), contexts=tuple(contexts),
                   lags=np.zeros((len(sources), len(targets), len(contexts)), dtype=np.int64))

    @classmethod
    def full(cls, axis: str, entities: Sequence[str], contexts: Sequence[str], lag: int = 1) -> 'InfluenceTensor':
        """Every entity influences every other one in every context at ``lag``."""
        lags = np.full((len(entities), len(entities), len(contexts)), lag, dtype=np.int64)
        lags[np.arange(len(entities)), np.arange(len(entities))] = 0
        return cls(axis=axis, sources=tuple(entities), targets=tuple(entities), contexts=tuple(contexts), lags=lags)

    @classmethod
    def from_edges(cls, axis: str, sources: Sequence[str], targets: Sequence[str], contexts: Sequence[str],
                   edges: Iterable[InfluenceEdge], failures: Iterable[GrangerFailure] = ()) -> 'InfluenceTensor':
        shape = (len(sources), len(targets), len(contexts))
        lags = np.zeros(shape, dtype=np.int64)
        p_values, delta = np.full(shape, np.nan), np.full(shape, np.nan)
        src_ix = {s: i for i, s in enumerate(sources)}
        dst_ix = {s: i for i, s in enumerate(targets)}
        ctx_ix = {s: i for i, s in enumerate(contexts)}
        for edge in edges:
            try:
                ix = src_ix[edge.src], dst_ix[edge.dst], ctx_ix[edge.context]
            except KeyError as e:
                raise DataError(f'Edge {edge.src} -> {edge.dst} ({edge.context}) is outside the tensor axes.') from e
            lags[ix], p_values[ix], delta[ix] = edge.lag, edge.p_value, edge.delta_mse
        return cls(axis=axis, sources=tuple(sources), targets=tuple(targets), contexts=tuple(contexts),
                   lags=lags, p_values=p_values, delta_mse=delta, failures=tuple(failures))

    @property
    def shape(self) -> Tuple[int, int, int]:
        return self.lags.shape  # type: ignore[return-value]

    @property
    def entities(self) -> List[str]:
        """Sources followed by any targets that are not also sources."""
        return list(self.sources) + [t for t in self.targets if t not in self.sources]

    def lag(self, src: str, dst: str, context: str) -> int:
        return int(self.lags[self.sources.index(src), self.targets.index(dst), self.contexts.index(context)])

    def nonzero(self) -> int:
        return int(np.count_nonzero(self.lags))

    def edges(self) -> List[InfluenceEdge]:
        """All non-zero entries in (source, target, context) order."""
        result = []
        for i, j, k in zip(*np.nonzero(self.lags)):
            p = self.p_values[i, j, k]
            delta = self.delta_mse[i, j, k]
            result.append(InfluenceEdge(
                src=self.sources[i], dst=self.targets[j], context=self.contexts[k], lag=int(self.lags[i, j, k]),
                p_value=float(p) if np.isfinite(p) and p > 0 else float(np.finfo(float).tiny),
                delta_mse=float(delta) if np.isfinite(delta) else 0.0,
            ))
        return result

    def weights(self, kind: str = 'lag') -> np.ndarray:
        """Edge weights used by rankings and graphs: the lag itself, or the MSE improvement of the edge."""
        if kind == 'lag':
            return self.lags.astype(float)
        if kind == 'delta_mse':
            return np.where(self.lags > 0, np.nan_to_num(self.delta_mse), 0.0)
        raise DataError(f'Unknown edge weight "{kind}".')

    def same_axes(self, other: 'InfluenceTensor') -> bool:
        return (self.sources, self.targets, self.contexts) == (other.sources, other.targets, other.contexts)

    def iter_pairs(self) -> Iterator[Tuple[int, int, int]]:
        """Index triples of every admissible (source, target, context) test; self pairs are skipped."""
        for k in range(len(self.contexts)):
            for i, src in enumerate(self.sources):
                for j, dst in enumerate(self.targets):
                    if src != dst:
                        yield i, j, k
