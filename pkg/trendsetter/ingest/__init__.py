from .config import IngestConfig
from .io import ManifestError, read_events, read_trajectories, read_unit_table, write_events, write_trajectories
from .models import TrajectorySet
from .trajectories import (
    UnknownUnitError, apply_split, build_trajectories, deseasonalize, deseasonalize_set, global_trend, style_labels,
)

__all__ = [
    'IngestConfig',
    'ManifestError',
    'TrajectorySet',
    'UnknownUnitError',
    'apply_split',
    'build_trajectories',
    'deseasonalize',
    'deseasonalize_set',
    'global_trend',
    'read_events',
    'read_trajectories',
    'read_unit_table',
    'style_labels',
    'write_events',
    'write_trajectories',
]
