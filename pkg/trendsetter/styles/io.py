import json
import logging
from pathlib import Path
from typing import Dict, List, Literal

import numpy as np
from pydantic import BaseModel

from .models import StyleModel

_log = logging.getLogger(__name__)

STYLE_MODEL_FORMAT = 'trendsetter.style-model/v1'


class StyleModelDocument(BaseModel):
    format: Literal['trendsetter.style-model/v1'] = STYLE_MODEL_FORMAT
    kind: Literal['gmm', 'nmf']
    k: int
    m: int
    parameters: Dict[str, List]

    class Config:
        extra = 'forbid'

    @classmethod
    def from_model(cls, model: StyleModel) -> 'StyleModelDocument':
        names = ('weights', 'means', 'variances') if model.kind == 'gmm' else ('components', 'scales')
        return cls(kind=model.kind, k=model.k, m=model.m,
                   parameters={name: getattr(model, name).tolist() for name in names})

    def to_model(self) -> StyleModel:
        return StyleModel(kind=self.kind, k=self.k, m=self.m,
                          **{name: np.asarray(value, dtype=float) for name, value in self.parameters.items()})


def save_style_model(model: StyleModel, path: Path) -> None:
    path.write_text(json.dumps(StyleModelDocument.from_model(model).dict(), indent=1) + '\n')
    _log.info(f'Wrote {model.kind} style model ({model.k} styles) to {path}.')


def load_style_model(path: Path) -> StyleModel:
    return StyleModelDocument.parse_file(path).to_model()
