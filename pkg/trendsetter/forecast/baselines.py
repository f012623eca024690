import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .models import SeriesTooShortError
from ..core.metrics import mae
from ..core.models import Trajectory
from ..exceptions import DataError
from ..influence.autoregression import fit_ar, forecast_recursive, least_squares

_log = logging.getLogger(__name__)

NAIVE_METHODS = ('gaussian', 'seasonal', 'mean', 'last', 'drift')
DECAY_GRID = np.round(np.arange(0.05, 1.0 + 1e-9, 0.05), 10)
_FLAT = 1e-12


def _check_horizon(horizon: int) -> None:
    if horizon < 1:
        raise DataError(f'Forecast horizon must be at least 1, got {horizon}.')


def forecast_naive(method: str, traj: Trajectory, horizon: int, seed: int = 0, season: int = 52) -> np.ndarray:
    """Naive forecasts from everything observed before the test region."""
    _check_horizon(horizon)
    y = traj.history
    n = len(y)
    steps = np.arange(1, horizon + 1)
    if method == 'mean':
        return np.full(horizon, y.mean())
    if method == 'last':
        return np.full(horizon, y[-1])
    if method == 'drift':
        slope = (y[-1] - y[0]) / (n - 1) if n > 1 else 0.0
        return y[-1] + slope * steps
    if method == 'seasonal':
        if n <= season:
            raise SeriesTooShortError(f'Seasonal forecasts need more than {season} observations, got {n}.')
        return y[n - season + (steps - 1) % season]
    if method == 'gaussian':
        rng = np.random.default_rng(seed)
        return rng.normal(y.mean(), y.std(), size=horizon)
    raise DataError(f'Unknown naive method "{method}"; expected one of {", ".join(NAIVE_METHODS)}.')


def forecast_ar(traj: Trajectory, d: int, horizon: int) -> np.ndarray:
    _check_horizon(horizon)
    model = fit_ar(traj.history, d)
    return forecast_recursive(model, traj.history, horizon)


@dataclass(frozen=True)
class ArimaModel:
    """ARIMA(p, d, q) fitted on the ``d``-times differenced series after removing its mean."""
    order: Tuple[int, int, int]
    mean: float
    ar: np.ndarray
    ma: np.ndarray
    residuals: np.ndarray
    differenced: np.ndarray
    flags: Tuple[str, ...] = ()

    def forecast_differenced(self, horizon: int) -> np.ndarray:
        p, _, q = self.order
        z = list(self.differenced - self.mean)
        e = list(self.residuals)
        for _ in range(horizon):
            value = sum(self.ar[i] * z[-1 - i] for i in range(p)) + sum(self.ma[j] * e[-1 - j] for j in range(q))
            z.append(value)
            e.append(0.0)
        return np.asarray(z[len(z) - horizon:]) + self.mean


def _lag_matrix(series: np.ndarray, lags: int, start: int) -> np.ndarray:
    t = np.arange(start, len(series))
    return np.column_stack([series[t - k] for k in range(1, lags + 1)]) if lags else np.zeros((len(t), 0))


def _residuals(z: np.ndarray, ar: np.ndarray, ma: np.ndarray) -> np.ndarray:
    p, q = len(ar), len(ma)
    e = np.zeros(len(z))
    for t in range(max(p, q), len(z)):
        e[t] = z[t] - sum(ar[i] * z[t - 1 - i] for i in range(p)) - sum(ma[j] * e[t - 1 - j] for j in range(q))
    return e


def _invertible(ma: np.ndarray) -> bool:
    if not len(ma) or not np.any(ma):
        return True
    # Roots of 1 + theta_1 z + ... + theta_q z^q must lie outside the unit circle.
    roots = np.roots(np.concatenate([ma[::-1], [1.0]]))
    return bool(np.all(np.abs(roots) > 1.0))


def fit_arima(series, order: Tuple[int, int, int] = (1, 1, 1)) -> ArimaModel:
    """Two-stage Hannan-Rissanen estimate.

    A long autoregression supplies residuals that stand in for the unobserved shocks; the AR and MA coefficients
    then come from one least-squares fit on lagged values and lagged residuals. A non-invertible MA part falls
    back to ARI(p, d).
    """
    y = np.asarray(series, dtype=float).ravel()
    p, d, q = order
    if len(y) <= p + d + q + 10:
        raise SeriesTooShortError(f'ARIMA{order} needs more than {p + d + q + 10} observations, got {len(y)}.')
    w = np.diff(y, d)
    mean = float(w.mean())
    z = w - mean
    n = len(z)
    if np.ptp(w) < _FLAT:
        _log.debug(f'Differenced series is constant; ARIMA{order} reduces to drift {mean:.6g}.')
        return ArimaModel(order=(0, d, 0), mean=mean, ar=np.zeros(0), ma=np.zeros(0), residuals=np.zeros(n),
                          differenced=w, flags=('constant_difference',))

    flags = []
    ar, ma = np.zeros(p), np.zeros(q)
    if q > 0:
        long_order = min(max(2 * max(p, q), int(np.log(n) ** 2)), n // 3)
        long_order = max(long_order, 1)
        long_fit = least_squares(_lag_matrix(z, long_order, long_order), z[long_order:])
        proxy = np.zeros(n)
        proxy[long_order:] = z[long_order:] - _lag_matrix(z, long_order, long_order) @ long_fit.coef
        start = long_order + q
        design = np.column_stack([_lag_matrix(z, p, start), _lag_matrix(proxy, q, start)])
        fit = least_squares(design, z[start:])
        ar, ma = fit.coef[:p], fit.coef[p:]
        if not _invertible(ma):
            _log.warning(f'ARIMA{order} fit has a non-invertible MA part; falling back to ARI({p}, {d}).')
            flags.append('non_invertible')
            ma = np.zeros(q)
            q = 0
    if q == 0 and p > 0:
        ar = least_squares(_lag_matrix(z, p, p), z[p:]).coef
    model_order = (p, d, q)
    return ArimaModel(order=model_order, mean=mean, ar=ar, ma=ma[:q], residuals=_residuals(z, ar, ma[:q]),
                      differenced=w, flags=tuple(flags))


def integrate(forecast: np.ndarray, series: np.ndarray, d: int) -> np.ndarray:
    """Undo ``d`` rounds of differencing, anchoring each round at the last observed value."""
    for level in range(d, 0, -1):
        forecast = np.diff(series, level - 1)[-1] + np.cumsum(forecast)
    return forecast


def forecast_arima(traj: Trajectory, order: Tuple[int, int, int] = (1, 1, 1), horizon: int = 26) -> np.ndarray:
    _check_horizon(horizon)
    model = fit_arima(traj.history, order)
    return integrate(model.forecast_differenced(horizon), traj.history, order[1])


def expsmooth_weights(n: int, decay: float) -> np.ndarray:
    weights = decay * (1.0 - decay) ** np.arange(n - 1, -1, -1, dtype=float)
    return weights / weights.sum()


def smooth(series, decay: float) -> float:
    """Exponentially decayed weighted average; the newest value has the largest weight."""
    y = np.asarray(series, dtype=float)
    return float(expsmooth_weights(len(y), decay) @ y)


def fit_expsmooth(traj: Trajectory, grid: Sequence[float] = DECAY_GRID, holdout: int = 4) -> float:
    """Decay with the lowest validation MAE when fitted on the train region; ties go to the smaller decay."""
    if traj.split is not None and traj.split.validation:
        train, validation = traj.train, traj.validation
    else:
        train, validation = traj.history[:-holdout], traj.history[-holdout:]
    if len(train) < 5:
        raise SeriesTooShortError(f'Exponential smoothing needs at least 5 training observations, got {len(train)}.')
    scores = [mae(np.full(len(validation), smooth(train, decay)), validation) for decay in grid]
    return float(grid[int(np.argmin(scores))])


def forecast_expsmooth(traj: Trajectory, horizon: int, decay: Optional[float] = None) -> np.ndarray:
    _check_horizon(horizon)
    decay = fit_expsmooth(traj) if decay is None else decay
    return np.full(horizon, smooth(traj.history, decay))


@dataclass(frozen=True)
class GeoModel:
    """``b + c t + A sin(2 pi t / period) + B cos(2 pi t / period)`` with t counted from 1."""
    intercept: float
    slope: float
    sin: float
    cos: float
    period: int
    n: int
    seasonal: bool = True

    def predict(self, t: np.ndarray) -> np.ndarray:
        angle = 2.0 * np.pi * t / self.period
        return self.intercept + self.slope * t + self.sin * np.sin(angle) + self.cos * np.cos(angle)


def fit_geomodel(series, period: int = 52) -> GeoModel:
    y = np.asarray(series, dtype=float).ravel()
    n = len(y)
    if n < 2:
        raise SeriesTooShortError('A trend model needs at least two observations.')
    t = np.arange(1, n + 1, dtype=float)
    seasonal = n >= 2 * period
    columns = [np.ones(n), t]
    if seasonal:
        angle = 2.0 * np.pi * t / period
        columns += [np.sin(angle), np.cos(angle)]
    else:
        _log.debug(f'Series of length {n} is shorter than two periods; fitting without seasonality.')
    coef = least_squares(np.column_stack(columns), y).coef
    sin, cos = (coef[2], coef[3]) if seasonal else (0.0, 0.0)
    return GeoModel(intercept=float(coef[0]), slope=float(coef[1]), sin=float(sin), cos=float(cos), period=period,
                    n=n, seasonal=seasonal)


def forecast_geomodel(traj: Trajectory, horizon: int, period: int = 52) -> np.ndarray:
    _check_horizon(horizon)
    model = fit_geomodel(traj.history, period)
    return model.predict(np.arange(model.n + 1, model.n + horizon + 1, dtype=float))
