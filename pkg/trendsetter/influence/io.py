import json
import logging
from pathlib import Path
from typing import List, Literal

from pydantic import BaseModel, Field

from ..core.models import MAX_LAG, GrangerFailure, InfluenceEdge, InfluenceTensor

_log = logging.getLogger(__name__)

INFLUENCE_FORMAT = 'trendsetter.influence/v1'


class EdgeDocument(BaseModel):
    src: str
    dst: str
    context: str
    lag: int = Field(..., ge=1, le=MAX_LAG)
    p: float = Field(..., gt=0, le=1)
    delta_mse: float = Field(..., ge=0)

    class Config:
        extra = 'forbid'


class TensorDocument(BaseModel):
    format: Literal['trendsetter.influence/v1'] = INFLUENCE_FORMAT
    axis: Literal['unit', 'style', 'global']
    sources: List[str]
    targets: List[str]
    contexts: List[str]
    edges: List[EdgeDocument] = []
    failures: List[GrangerFailure] = []

    class Config:
        extra = 'forbid'

    @classmethod
    def from_tensor(cls, tensor: InfluenceTensor) -> 'TensorDocument':
        edges = [EdgeDocument(src=e.src, dst=e.dst, context=e.context, lag=e.lag, p=e.p_value,
                              delta_mse=e.delta_mse) for e in tensor.edges()]
        return cls(axis=tensor.axis, sources=list(tensor.sources), targets=list(tensor.targets),
                   contexts=list(tensor.contexts), edges=edges, failures=list(tensor.failures))

    def to_tensor(self) -> InfluenceTensor:
        edges = [InfluenceEdge(src=e.src, dst=e.dst, context=e.context, lag=e.lag, p_value=e.p,
                               delta_mse=e.delta_mse) for e in self.edges]
        return InfluenceTensor.from_edges(self.axis, self.sources, self.targets, self.contexts, edges, self.failures)


def save_tensor(tensor: InfluenceTensor, path: Path) -> None:
    path.write_text(json.dumps(TensorDocument.from_tensor(tensor).dict(), indent=1) + '\n')
    _log.info(f'Wrote {tensor.axis} influence tensor with {tensor.nonzero()} edges to {path}.')


def load_tensor(path: Path) -> InfluenceTensor:
    return TensorDocument.parse_file(path).to_tensor()
