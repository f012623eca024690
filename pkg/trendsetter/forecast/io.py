import json
import logging
from pathlib import Path
from typing import Dict, Mapping

import numpy as np
import pandas as pd

from .evaluate import ForecastReport
from .models import Forecasts
from ..exceptions import DataError

_log = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'


def write_forecasts(forecasts: Mapping[str, Forecasts], path: Path) -> None:
    """CSV ``model,style,unit,step,value``; steps count from 1."""
    rows = [
        (model, style, unit, step, value)
        for model, per_key in forecasts.items()
        for (style, unit), values in per_key.items()
        for step, value in enumerate(np.asarray(values, dtype=float), 1)
    ]
    frame = pd.DataFrame(rows, columns=['model', 'style', 'unit', 'step', 'value'])
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    _log.info(f'Wrote forecasts of {len(forecasts)} models to {path}.')


def read_forecasts(path: Path) -> Dict[str, Forecasts]:
    frame = pd.read_csv(path, dtype={'model': str, 'style': str, 'unit': str})
    if not {'model', 'style', 'unit', 'step', 'value'} <= set(frame.columns):
        raise DataError(f'{path}: forecast CSV needs model, style, unit, step and value columns.')
    forecasts: Dict[str, Forecasts] = {}
    for (model, style, unit), group in frame.sort_values('step').groupby(['model', 'style', 'unit'], sort=False):
        steps = group['step'].to_numpy()
        if not np.array_equal(steps, np.arange(1, len(steps) + 1)):
            raise DataError(f'{path}: forecast steps of ({model}, {style}, {unit}) are not 1..{len(steps)}.')
        forecasts.setdefault(model, {})[style, unit] = group['value'].to_numpy(dtype=float)
    return forecasts


def write_report(report: ForecastReport, directory: Path) -> None:
    """``report.json`` with per-trajectory detail and ``report.csv`` sorted by MAE."""
    directory.mkdir(parents=True, exist_ok=True)
    document = {'horizon': report.horizon, 'models': {name: report.models[name].dict() for name in report.ranked()}}
    (directory / 'report.json').write_text(json.dumps(document, indent=1) + '\n')
    pd.DataFrame(report.rows(), columns=['model', 'mae', 'mape']).to_csv(
        directory / 'report.csv', index=False, float_format=FLOAT_FORMAT)
    _log.info(f'Wrote report for {len(report.models)} models to {directory}.')
