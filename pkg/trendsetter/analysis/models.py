from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np
from prettytable import PrettyTable

from ..exceptions import DataError, NumericalError

SCORES = ('exerted', 'received', 'net')


class DegenerateCorrelationError(NumericalError):
    """A rank correlation is undefined because one side has no rank variance."""
    pass


class MissingMetadataError(DataError):
    pass


@dataclass(frozen=True)
class InfluenceRanking:
    """Influence exerted and received per entity, ordered by net influence (highest first, ties by id)."""
    ids: Tuple[str, ...]
    exerted: np.ndarray
    received: np.ndarray
    contexts: Tuple[str, ...] = ()
    #: Exerted influence split by context, rows aligned with ``ids``.
    per_context: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        exerted = np.asarray(self.exerted, dtype=float)
        received = np.asarray(self.received, dtype=float)
        if not len(self.ids) == len(exerted) == len(received):
            raise DataError('Ranking columns have different lengths.')
        if len(set(self.ids)) != len(self.ids):
            raise DataError('Ranking ids must be unique.')
        per_context = np.zeros((len(self.ids), len(self.contexts))) if self.per_context is None \
            else np.asarray(self.per_context, dtype=float)
        order = sorted(range(len(self.ids)), key=lambda i: (-(exerted[i] - received[i]), self.ids[i]))
        object.__setattr__(self, 'ids', tuple(self.ids[i] for i in order))
        object.__setattr__(self, 'exerted', exerted[order])
        object.__setattr__(self, 'received', received[order])
        object.__setattr__(self, 'contexts', tuple(self.contexts))
        object.__setattr__(self, 'per_context', per_context[order] if per_context.size else per_context)

    @property
    def net(self) -> np.ndarray:
        return self.exerted - self.received

    def __len__(self) -> int:
        return len(self.ids)

    def scores(self, kind: str = 'exerted') -> Dict[str, float]:
        if kind not in SCORES:
            raise DataError(f'Unknown score "{kind}"; expected one of {", ".join(SCORES)}.')
        values = getattr(self, kind)
        return {i: float(v) for i, v in zip(self.ids, values)}

    def entry(self, entity: str) -> Tuple[float, float, float]:
        i = self.ids.index(entity)
        return float(self.exerted[i]), float(self.received[i]), float(self.net[i])

    def breakdown(self, entity: str) -> Dict[str, float]:
        """Exerted influence of ``entity`` per context."""
        i = self.ids.index(entity)
        return {c: float(v) for c, v in zip(self.contexts, self.per_context[i])}

    def top(self, n: int) -> List[str]:
        return list(self.ids[:n])

    def table(self, limit: int = 20) -> PrettyTable:
        table = PrettyTable()
        table.field_names = ['#', 'Id', 'Exerted', 'Received', 'Net']
        for rank, i in enumerate(range(min(limit, len(self.ids))), 1):
            table.add_row([rank, self.ids[i], f'{self.exerted[i]:g}', f'{self.received[i]:g}', f'{self.net[i]:g}'])
        table.align['Id'] = 'l'
        return table


@dataclass(frozen=True)
class InfluenceDynamics:
    """Exerted influence per entity over sliding windows; ``scores`` has shape (windows, entities)."""
    window_starts: Tuple[int, ...]
    ids: Tuple[str, ...]
    scores: np.ndarray
    window: int
    stride: int

    def series(self, entity: str) -> np.ndarray:
        return self.scores[:, self.ids.index(entity)]
