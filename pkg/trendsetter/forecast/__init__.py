from .baselines import (
    fit_arima, fit_expsmooth, fit_geomodel, forecast_ar, forecast_arima, forecast_expsmooth, forecast_geomodel,
    forecast_naive,
)
from .coherent import CoherentForecaster, forecast_coherent, train_coherent
from .combined import CombinedForecaster, ablation_suite, select_alpha, train_combined
from .config import ForecastConfig
from .evaluate import ForecastReport, evaluate, score_forecasts, standard_models
from .io import read_forecasts, write_forecasts, write_report
from .models import TrainingDivergedError, UntrainedForecasterError
from .var import fit_var, forecast_var

__all__ = [
    'CoherentForecaster',
    'CombinedForecaster',
    'ForecastConfig',
    'ForecastReport',
    'TrainingDivergedError',
    'UntrainedForecasterError',
    'ablation_suite',
    'evaluate',
    'fit_arima',
    'fit_expsmooth',
    'fit_geomodel',
    'fit_var',
    'forecast_ar',
    'forecast_arima',
    'forecast_coherent',
    'forecast_expsmooth',
    'forecast_geomodel',
    'forecast_naive',
    'forecast_var',
    'read_forecasts',
    'score_forecasts',
    'select_alpha',
    'standard_models',
    'train_coherent',
    'train_combined',
    'write_forecasts',
    'write_report',
]
