from .autoregression import fit_ar, forecast_recursive, least_squares
from .config import InfluenceConfig
from .granger import f_survival, granger_scan, granger_test
from .io import load_tensor, save_tensor
from .models import ARModel, GrangerResult, InsufficientDataError
from .tensor import build_global_tensor, build_influence_tensor, unit_to_global

__all__ = [
    'ARModel',
    'GrangerResult',
    'InfluenceConfig',
    'InsufficientDataError',
    'build_global_tensor',
    'build_influence_tensor',
    'f_survival',
    'fit_ar',
    'forecast_recursive',
    'granger_scan',
    'granger_test',
    'least_squares',
    'load_tensor',
    'save_tensor',
    'unit_to_global',
]
