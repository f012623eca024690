import json
import logging
from datetime import datetime
from pathlib import Path
from typing import List, Literal, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ValidationError

from .models import TrajectorySet
from ..core.models import EventLog, EventRecord, Split
from ..exceptions import DataError

_log = logging.getLogger(__name__)

TRAJECTORY_FORMAT = 'trendsetter.trajectories/v1'
TRAJECTORY_CSV = 'trajectories.csv'
MANIFEST_JSON = 'manifest.json'
FLOAT_FORMAT = '%.17g'


class ManifestError(DataError):
    """A manifest is malformed or does not agree with the data next to it."""
    pass


class SplitDocument(BaseModel):
    train_end: int
    val_end: int
    length: int


class TrajectoryManifest(BaseModel):
    format: Literal['trendsetter.trajectories/v1'] = TRAJECTORY_FORMAT
    styles: List[str]
    units: List[str]
    resolution: str = 'week'
    t0: int = 0
    length: int
    split: Optional[SplitDocument] = None

    class Config:
        extra = 'forbid'


def read_events(path: Path, epoch: datetime = datetime(2013, 1, 7), timezone: str = 'UTC') -> EventLog:
    """Read events from JSON lines (``.jsonl``/``.json``) or CSV ``unit,t,a0,...``."""
    if not path.is_file():
        raise DataError(f'Event file {path} does not exist.')
    if path.suffix.lower() in ('.jsonl', '.json', '.ndjson'):
        records = []
        with path.open() as f:
            for line_no, line in enumerate(f, 1):
                if not line.strip():
                    continue
                try:
                    records.append(EventRecord.parse_raw(line))
                except ValidationError as e:
                    raise DataError(f'{path}:{line_no}: invalid event: {e}') from e
        events = EventLog.from_records(records, epoch, timezone)
    else:
        frame = pd.read_csv(path, dtype={'unit': str})
        attr_columns = [c for c in frame.columns if c not in ('unit', 't')]
        if 'unit' not in frame or 't' not in frame or not attr_columns:
            raise DataError(f'{path}: event CSV needs unit, t and attribute columns.')
        events = EventLog(units=frame['unit'].to_numpy(), t=frame['t'].to_numpy(),
                          attrs=frame[attr_columns].to_numpy(dtype=float))
    _log.info(f'Read {len(events)} events with {events.m} attributes from {path}.')
    return events


def read_unit_table(path: Path) -> List[str]:
    frame = pd.read_csv(path, dtype=str)
    if 'unit' not in frame:
        raise DataError(f'{path}: unit table needs a "unit" column.')
    return frame['unit'].tolist()


def write_events(events: EventLog, path: Path) -> None:
    frame = pd.DataFrame(events.attrs, columns=[f'a{i}' for i in range(events.m)])
    frame.insert(0, 't', events.t)
    frame.insert(0, 'unit', events.units)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)


def write_trajectories(ts: TrajectorySet, directory: Path) -> None:
    """Write ``trajectories.csv`` (style,unit,t,value) and ``manifest.json`` into ``directory``."""
    directory.mkdir(parents=True, exist_ok=True)
    styles, units, t = np.meshgrid(np.arange(len(ts.styles)), np.arange(len(ts.units)), np.arange(ts.length),
                                   indexing='ij')
    frame = pd.DataFrame({
        'style': np.asarray(ts.styles, dtype=object)[styles.ravel()],
        'unit': np.asarray(ts.units, dtype=object)[units.ravel()],
        't': t.ravel() + ts.t0,
        'value': ts.values.ravel(),
    })
    frame.to_csv(directory / TRAJECTORY_CSV, index=False, float_format=FLOAT_FORMAT)
    split = None if ts.split is None else SplitDocument(**vars(ts.split))
    manifest = TrajectoryManifest(styles=list(ts.styles), units=list(ts.units), resolution=ts.resolution,
                                  t0=ts.t0, length=ts.length, split=split)
    (directory / MANIFEST_JSON).write_text(json.dumps(manifest.dict(), indent=1) + '\n')
    _log.info(f'Wrote {len(ts.styles)} x {len(ts.units)} trajectories to {directory}.')


def read_trajectories(path: Path) -> TrajectorySet:
    """Read a trajectory directory, or a bare ``style,unit,t,value`` CSV (no manifest, no split)."""
    csv_path = path / TRAJECTORY_CSV if path.is_dir() else path
    manifest_path = csv_path.parent / MANIFEST_JSON
    if not csv_path.is_file():
        raise DataError(f'Trajectory file {csv_path} does not exist.')
    frame = pd.read_csv(csv_path, dtype={'style': str, 'unit': str})
    if not {'style', 'unit', 't', 'value'} <= set(frame.columns):
        raise DataError(f'{csv_path}: trajectory CSV needs style, unit, t and value columns.')

    manifest = None
    if manifest_path.is_file():
        try:
            manifest = TrajectoryManifest.parse_file(manifest_path)
        except ValidationError as e:
            raise ManifestError(f'{manifest_path}: {e}') from e
    styles = manifest.styles if manifest else sorted(frame['style'].unique())
    units = manifest.units if manifest else sorted(frame['unit'].unique())
    t0 = manifest.t0 if manifest else int(frame['t'].min())
    length = manifest.length if manifest else int(frame['t'].max()) - t0 + 1

    duplicated = frame.duplicated(['style', 'unit', 't'], keep=False)
    if duplicated.any():
        first = frame[duplicated].iloc[0]
        raise ManifestError(f'{csv_path}: {int(duplicated.sum())} rows repeat a (style, unit, t) key, '
                            f'first at style={first["style"]} unit={first["unit"]} t={first["t"]}.')
    table = frame.pivot_table(index=['style', 'unit'], columns='t', values='value', aggfunc='first')
    expected_t = list(range(t0, t0 + length))
    if list(table.columns) != expected_t or len(table) != len(styles) * len(units):
        raise ManifestError(f'{csv_path} does not hold complete trajectories for t = {t0}..{t0 + length - 1} '
                            f'over {len(styles)} styles x {len(units)} units.')
    table = table.reindex(pd.MultiIndex.from_product([styles, units]))
    if table.isna().any().any():
        raise ManifestError(f'{csv_path} does not match the styles and units of {manifest_path}.')
    values = table.to_numpy(dtype=float).reshape(len(styles), len(units), length)
    split = Split(**manifest.split.dict()) if manifest and manifest.split else None
    return TrajectorySet(styles=tuple(styles), units=tuple(units), values=values, split=split,
                         resolution=manifest.resolution if manifest else 'week', t0=t0)
