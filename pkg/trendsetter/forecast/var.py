import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .models import Forecasts
from ..exceptions import DataError
from ..influence.autoregression import least_squares
from ..influence.models import InsufficientDataError
from ..ingest.models import TrajectorySet

_log = logging.getLogger(__name__)

SCOPES = ('all_units_per_style', 'all_styles_per_unit')


@dataclass(frozen=True)
class VARModel:
    """Vector autoregression of N series.

    Row i of ``coef`` holds the lag coefficients of equation i, grouped by series: columns j*d .. j*d+d-1 are
    series j at lags 1..d.
    """
    intercepts: np.ndarray
    coef: np.ndarray
    d: int
    ridge: bool = False

    @property
    def n_series(self) -> int:
        return len(self.intercepts)

    def cross(self, i: int, j: int, lag: int = 1) -> float:
        """Coefficient of series ``j`` at ``lag`` in the equation of series ``i``."""
        return float(self.coef[i, j * self.d + lag - 1])

    def predict_next(self, history: np.ndarray) -> np.ndarray:
        lags = history[:, ::-1][:, :self.d].ravel()
        return np.array([self.intercepts[i] + float(self.coef[i] @ lags) for i in range(self.n_series)])


def var_design(block: np.ndarray, d: int) -> np.ndarray:
    t = np.arange(d, block.shape[1])
    return np.column_stack([np.ones(len(t))] + [series[t - k] for series in block for k in range(1, d + 1)])


def fit_var(block, d: int) -> VARModel:
    """Per-equation least squares on [1, lags 1..d of every series]; ridge when the design is rank deficient."""
    block = np.atleast_2d(np.asarray(block, dtype=float))
    n, length = block.shape
    if length - d < 2:
        raise InsufficientDataError(f'Series of length {length} are too short for an order-{d} VAR.')
    if n * d >= length - d:
        _log.warning(f'VAR with {n} series x order {d} has more regressors than the {length - d} rows; '
                     f'using ridge fallback.')
    design = var_design(block, d)
    fits = [least_squares(design, series[d:]) for series in block]
    coef = np.stack([fit.coef for fit in fits])
    return VARModel(intercepts=coef[:, 0], coef=coef[:, 1:], d=d, ridge=any(fit.ridge for fit in fits))


def forecast_block(model: VARModel, history: np.ndarray, horizon: int) -> np.ndarray:
    buffer = np.array(history, dtype=float)
    out = np.empty((model.n_series, horizon))
    for h in range(horizon):
        out[:, h] = model.predict_next(buffer)
        buffer = np.column_stack([buffer, out[:, h]])
    return out


def _blocks(ts: TrajectorySet, scope: str) -> Tuple[Tuple[str, ...], Tuple[str, ...], np.ndarray]:
    if scope == 'all_units_per_style':
        return ts.styles, ts.units, ts.values
    if scope == 'all_styles_per_unit':
        return ts.units, ts.styles, ts.values.transpose(1, 0, 2)
    raise DataError(f'Unknown VAR scope "{scope}"; expected one of {", ".join(SCOPES)}.')


def forecast_var(ts: TrajectorySet, scope: str = 'all_units_per_style', d: int = 8,
                 horizon: int = 26) -> Forecasts:
    """One VAR per style over all units (or per unit over all styles), forecast jointly from the test origin."""
    groups, members, values = _blocks(ts, scope)
    end = ts.history_end
    forecasts: Forecasts = {}
    for g, group in enumerate(groups):
        history = values[g, :, :end]
        out = forecast_block(fit_var(history, d), history, horizon)
        for m, member in enumerate(members):
            key = (group, member) if scope == 'all_units_per_style' else (member, group)
            forecasts[key] = out[m]
    _log.debug(f'VAR ({scope}) forecast {len(forecasts)} trajectories.')
    return {key: forecasts[key] for key in ts.keys()}
