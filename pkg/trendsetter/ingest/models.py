from dataclasses import dataclass, replace
from typing import Dict, Iterator, Optional, Sequence, Tuple

import numpy as np

from ..core.models import Split, StyleId, Trajectory, TrajectoryKey, UnitId
from ..exceptions import DataError


@dataclass(frozen=True)
class TrajectorySet:
    """Aligned popularity trajectories for every (style, unit) pair.

    ``values`` has shape (styles, units, T). Every trajectory shares the same length and split boundaries.
    """
    styles: Tuple[StyleId, ...]
    units: Tuple[UnitId, ...]
    values: np.ndarray
    split: Optional[Split] = None
    resolution: str = 'week'
    t0: int = 0

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 3 or values.shape[:2] != (len(self.styles), len(self.units)):
            raise DataError(f'Trajectory values of shape {values.shape} do not match '
                            f'{len(self.styles)} styles x {len(self.units)} units.')
        if len(set(self.styles)) != len(self.styles) or len(set(self.units)) != len(self.units):
            raise DataError('Style and unit ids must be unique.')
        if not np.all(np.isfinite(values)):
            raise DataError('Trajectories contain non-finite values.')
        if self.split is not None and self.split.length != values.shape[2]:
            raise DataError(f'Split length {self.split.length} does not match trajectory length {values.shape[2]}.')
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'styles', tuple(self.styles))
        object.__setattr__(self, 'units', tuple(self.units))

    @property
    def length(self) -> int:
        return self.values.shape[2]

    @property
    def history_end(self) -> int:
        """End of the region that discovery and fitting may look at."""
        return self.length if self.split is None else self.split.val_end

    def keys(self) -> Iterator[TrajectoryKey]:
        for style in self.styles:
            for unit in self.units:
                yield style, unit

    def index(self, style: StyleId, unit: UnitId) -> Tuple[int, int]:
        try:
            return self.styles.index(style), self.units.index(unit)
        except ValueError as e:
            raise DataError(f'Unknown trajectory ({style}, {unit}).') from e

    def series(self, style: StyleId, unit: UnitId) -> np.ndarray:
        return self.values[self.index(style, unit)]

    def trajectory(self, style: StyleId, unit: UnitId) -> Trajectory:
        return Trajectory(style=style, unit=unit, values=self.series(style, unit), split=self.split)

    @property
    def trajectories(self) -> Dict[TrajectoryKey, Trajectory]:
        return {key: self.trajectory(*key) for key in self.keys()}

    def style_block(self, style: StyleId) -> np.ndarray:
        if style not in self.styles:
            raise DataError(f'Unknown style {style}.')
        return self.values[self.styles.index(style)]

    def with_values(self, values: np.ndarray, split: Optional[Split] = None) -> 'TrajectorySet':
        return replace(self, values=values, split=split)

    def with_split(self, split: Optional[Split]) -> 'TrajectorySet':
        return replace(self, split=split)

    def swapped(self) -> 'TrajectorySet':
        """The same data with the roles of styles and units exchanged."""
        return replace(self, styles=self.units, units=self.styles, values=self.values.transpose(1, 0, 2))

    def window(self, start: int, stop: int) -> 'TrajectorySet':
        """Buckets ``start`` (inclusive) to ``stop`` (exclusive) without split boundaries."""
        if not 0 <= start < stop <= self.length:
            raise DataError(f'Window [{start}, {stop}) is outside a series of length {self.length}.')
        return replace(self, values=self.values[:, :, start:stop], split=None, t0=self.t0 + start)

    @classmethod
    def from_trajectories(cls, trajectories: Sequence[Trajectory], resolution: str = 'week',
                          t0: int = 0) -> 'TrajectorySet':
        styles = tuple(dict.fromkeys(t.style for t in trajectories))
        units = tuple(dict.fromkeys(t.unit for t in trajectories))
        lengths = {len(t) for t in trajectories}
        splits = {t.split for t in trajectories}
        if len(lengths) != 1 or len(splits) != 1:
            raise DataError('Trajectories in a set must share length and split boundaries.')
        lookup = {t.key: t for t in trajectories}
        missing = [(s, u) for s in styles for u in units if (s, u) not in lookup]
        if missing:
            raise DataError(f'Missing trajectories for {missing[:5]}.')
        values = np.stack([np.stack([lookup[s, u].values for u in units]) for s in styles])
        return cls(styles=styles, units=units, values=values, split=splits.pop(), resolution=resolution, t0=t0)
