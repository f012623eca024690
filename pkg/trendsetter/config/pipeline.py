import json
import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import yaml
from pydantic import BaseModel, ValidationError

from trendsetter.analysis.config import AnalysisConfig
from trendsetter.exceptions import DataError
from trendsetter.forecast.config import ForecastConfig
from trendsetter.influence.config import InfluenceConfig
from trendsetter.ingest.config import IngestConfig
from trendsetter.styles.config import StylesConfig

_log = logging.getLogger(__name__)


class PipelineConfig(BaseModel):
    """Tunables of every pipeline stage"""

    ingest: IngestConfig = IngestConfig()
    styles: StylesConfig = StylesConfig()
    influence: InfluenceConfig = InfluenceConfig()
    forecast: ForecastConfig = ForecastConfig()
    analysis: AnalysisConfig = AnalysisConfig()

    class Config:
        extra = 'forbid'


def merge(base: Mapping[str, Any], overrides: Mapping[str, Any]) -> Dict[str, Any]:
    """Nested dictionary merge; values in ``overrides`` win."""
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def read_document(path: Path) -> Dict[str, Any]:
    """A YAML or JSON mapping from ``path``."""
    try:
        with path.open() as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise DataError(f'Cannot read config file {path}: {e}') from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise DataError(f'Config file {path} must hold a mapping.')
    return data


def load_pipeline_config(path: Optional[Path] = None,
                         overrides: Optional[Mapping[str, Any]] = None) -> PipelineConfig:
    """Defaults, then the config file, then ``overrides`` (typically command-line flags), validated once."""
    document = read_document(path) if path else {}
    document = merge(document, overrides or {})
    try:
        config = PipelineConfig.parse_obj(document)
    except ValidationError as e:
        raise DataError(f'Invalid configuration{f" in {path}" if path else ""}: {e}') from e
    _log.debug(f'Pipeline config: {json.dumps(config.dict(), default=str)}')
    return config
