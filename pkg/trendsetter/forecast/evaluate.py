import logging
from typing import Callable, Dict, List, Mapping, Optional, Protocol, Tuple

import numpy as np
from prettytable import PrettyTable
from pydantic import BaseModel

from .baselines import forecast_ar, forecast_arima, forecast_expsmooth, forecast_geomodel, forecast_naive
from .coherent import forecast_coherent, train_coherent
from .combined import ablation_suite, train_combined
from .config import ABLATIONS, ForecastConfig
from .models import Forecasts
from .var import forecast_var
from ..core.metrics import UndefinedMetricError, mae, mape_detail
from ..core.models import InfluenceTensor, Trajectory
from ..exceptions import DataError
from ..ingest.models import TrajectorySet
from ..parallel import ordered_map

_log = logging.getLogger(__name__)


class Forecaster(Protocol):
    def __call__(self, ts: TrajectorySet, horizon: int) -> Forecasts:
        """Fit on everything before the test region and forecast ``horizon`` steps from its start."""
        ...


def per_trajectory(fn: Callable[[Trajectory, int], np.ndarray], jobs: int = 1) -> Forecaster:
    """Lift a single-trajectory forecast function to a whole set."""
    def forecaster(ts: TrajectorySet, horizon: int) -> Forecasts:
        keys = list(ts.keys())
        results = ordered_map(lambda key: fn(ts.trajectory(*key), horizon), keys, jobs)
        return dict(zip(keys, results))
    return forecaster


def standard_models(config: ForecastConfig, unit_tensor: Optional[InfluenceTensor] = None,
                    style_tensor: Optional[InfluenceTensor] = None, jobs: int = 1) -> Dict[str, Forecaster]:
    """Forecasters named in ``config.models``; learned ones need the matching influence tensors."""
    def needs(tensor: Optional[InfluenceTensor], name: str) -> InfluenceTensor:
        if tensor is None:
            raise DataError(f'Model "{name}" needs an influence tensor.')
        return tensor

    def coherent(tensor_name: str):
        def forecaster(ts: TrajectorySet, horizon: int) -> Forecasts:
            tensor = needs(unit_tensor if tensor_name == 'unit' else style_tensor, f'coherent_{tensor_name}')
            return forecast_coherent(train_coherent(ts, tensor, config, jobs), ts, horizon)
        return forecaster

    def combined(ts: TrajectorySet, horizon: int) -> Forecasts:
        model = train_combined(ts, needs(unit_tensor, 'combined'), needs(style_tensor, 'combined'), config, jobs)
        return model.forecast(ts, horizon)

    seed = config.seed
    factories: Dict[str, Callable[[], Forecaster]] = {
        'ar': lambda: per_trajectory(lambda t, h: forecast_ar(t, config.order, h), jobs),
        'arima': lambda: per_trajectory(lambda t, h: forecast_arima(t, config.arima_order, h), jobs),
        'expsmooth': lambda: per_trajectory(forecast_expsmooth, jobs),
        'geomodel': lambda: per_trajectory(lambda t, h: forecast_geomodel(t, h, config.season), jobs),
        'var_units': lambda: lambda ts, h: forecast_var(ts, 'all_units_per_style', config.order, h),
        'var_styles': lambda: lambda ts, h: forecast_var(ts, 'all_styles_per_unit', config.order, h),
        'coherent_unit': lambda: coherent('unit'),
        'coherent_style': lambda: coherent('style'),
        'combined': lambda: combined,
    }
    for method in ('gaussian', 'seasonal', 'mean', 'last', 'drift'):
        factories[method] = (lambda m: lambda: per_trajectory(
            lambda t, h: forecast_naive(m, t, h, seed=seed, season=config.season), jobs))(method)

    models: Dict[str, Forecaster] = {}
    ablations = [name for name in config.models if name in ABLATIONS]
    for name in config.models:
        if name in factories:
            models[name] = factories[name]()
    if ablations:
        # One suite run per (set, horizon); sets are compared by identity.
        cache: List[Tuple[TrajectorySet, int, Dict[str, Forecasts]]] = []

        def ablation(name: str) -> Forecaster:
            def forecaster(ts: TrajectorySet, horizon: int) -> Forecasts:
                for seen, seen_horizon, suite in cache:
                    if seen is ts and seen_horizon == horizon:
                        return suite[name]
                suite = ablation_suite(ts, needs(unit_tensor, name), needs(style_tensor, name), config, horizon, jobs)
                cache.append((ts, horizon, suite))
                return suite[name]
            return forecaster
        for name in ablations:
            models[name] = ablation(name)
    return models


class TrajectoryScore(BaseModel):
    style: str
    unit: str
    mae: float
    mape: Optional[float]


class ModelScore(BaseModel):
    mae: float
    mape: Optional[float]
    mape_skipped: int = 0
    per_trajectory: List[TrajectoryScore]


class ForecastReport(BaseModel):
    """Test-region errors per model, pooled over every trajectory."""
    horizon: int
    models: Dict[str, ModelScore]

    def ranked(self) -> List[str]:
        return sorted(self.models, key=lambda name: (self.models[name].mae, name))

    def table(self) -> PrettyTable:
        table = PrettyTable()
        table.field_names = ['Model', 'MAE', 'MAPE']
        for name in self.ranked():
            score = self.models[name]
            table.add_row([name, f'{score.mae:.6f}', '-' if score.mape is None else f'{score.mape:.4f}'])
        table.align['Model'] = 'l'
        table.align['MAE'] = 'r'
        table.align['MAPE'] = 'r'
        return table

    def rows(self) -> List[dict]:
        return [{'model': name, 'mae': self.models[name].mae, 'mape': self.models[name].mape}
                for name in self.ranked()]


def _truth(ts: TrajectorySet, horizon: int) -> Dict:
    if ts.split is None:
        raise DataError('Evaluation needs train / validation / test boundaries.')
    if horizon > ts.split.test:
        raise DataError(f'Horizon {horizon} is longer than the {ts.split.test}-step test region.')
    start = ts.split.val_end
    return {key: ts.series(*key)[start:start + horizon] for key in ts.keys()}


def _optional_mape(predicted, truth):
    try:
        return mape_detail(predicted, truth)
    except UndefinedMetricError:
        return None, len(truth)


def score_forecasts(forecasts: Mapping[str, Forecasts], ts: TrajectorySet, horizon: int = 26) -> ForecastReport:
    """Score precomputed test-region forecasts."""
    truth = _truth(ts, horizon)
    models = {}
    for name, forecast in forecasts.items():
        missing = [key for key in truth if key not in forecast]
        if missing:
            raise DataError(f'Model {name} has no forecast for {missing[:5]}.')
        per = []
        for (style, unit), expected in truth.items():
            predicted = np.asarray(forecast[style, unit], dtype=float)[:horizon]
            per.append(TrajectoryScore(style=style, unit=unit, mae=mae(predicted, expected),
                                       mape=_optional_mape(predicted, expected)[0]))
        pooled_pred = np.concatenate([np.asarray(forecast[key], dtype=float)[:horizon] for key in truth])
        pooled_truth = np.concatenate(list(truth.values()))
        pooled_mape, skipped = _optional_mape(pooled_pred, pooled_truth)
        if skipped:
            _log.warning(f'Model {name}: MAPE skipped {skipped} near-zero true values.')
        models[name] = ModelScore(mae=mae(pooled_pred, pooled_truth), mape=pooled_mape, mape_skipped=skipped,
                                  per_trajectory=per)
    return ForecastReport(horizon=horizon, models=models)


def run_models(models: Mapping[str, Forecaster], ts: TrajectorySet, horizon: int = 26) -> Dict[str, Forecasts]:
    forecasts = {}
    for name, forecaster in models.items():
        _log.info(f'Forecasting with {name}.')
        forecasts[name] = forecaster(ts, horizon)
    return forecasts


def evaluate(models: Mapping[str, Forecaster], ts: TrajectorySet, horizon: int = 26) -> ForecastReport:
    """MAE and MAPE of every model on the test region, averaged over all trajectories."""
    _truth(ts, horizon)
    report = score_forecasts(run_models(models, ts, horizon), ts, horizon)
    _log.info(f'Best model by MAE: {report.ranked()[0]}.' if report.models else 'No models evaluated.')
    return report
