import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .models import ARModel, InsufficientDataError
from ..exceptions import DataError

_log = logging.getLogger(__name__)

RIDGE = 1e-8


@dataclass(frozen=True)
class LeastSquaresFit:
    coef: np.ndarray
    ssr: float
    rank: int
    ridge: bool


def least_squares(x: np.ndarray, y: np.ndarray, ridge: float = RIDGE) -> LeastSquaresFit:
    """Ordinary least squares; a rank-deficient design is solved with a small ridge penalty when ``ridge > 0``."""
    rank = int(np.linalg.matrix_rank(x)) if x.size else 0
    deficient = rank < x.shape[1]
    if deficient and ridge > 0:
        coef = np.linalg.solve(x.T @ x + ridge * np.eye(x.shape[1]), x.T @ y)
    else:
        coef = np.linalg.lstsq(x, y, rcond=None)[0]
    residual = y - x @ coef
    return LeastSquaresFit(coef=coef, ssr=float(residual @ residual), rank=rank, ridge=deficient and ridge > 0)


def lagged_design(series: np.ndarray, d: int, start: int,
                  external: Optional[Tuple[np.ndarray, Sequence[int]]] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Regression rows t = start..T-1 with columns [1, y[t-1..t-d], x[t-l] for each external lag l]."""
    t = np.arange(start, len(series))
    columns = [np.ones(len(t))] + [series[t - k] for k in range(1, d + 1)]
    if external is not None:
        source, lags = external
        columns += [source[t - lag] for lag in lags]
    return np.column_stack(columns), series[t]


def fit_ar(series, d: int, external: Optional[Tuple[Sequence[float], Sequence[int]]] = None,
           start: Optional[int] = None) -> ARModel:
    """Fit an order-``d`` autoregression, optionally with lags of an external series.

    Rows run from ``start`` (default: the largest lag used) to the end of ``series``.
    """
    y = np.asarray(series, dtype=float).ravel()
    if d < 0:
        raise DataError(f'Autoregression order must be non-negative, got {d}.')
    ext = None
    lags: Tuple[int, ...] = ()
    if external is not None:
        source = np.asarray(external[0], dtype=float).ravel()
        lags = tuple(int(lag) for lag in external[1])
        if len(source) != len(y):
            raise DataError(f'External series has length {len(source)}, expected {len(y)}.')
        if any(lag < 1 for lag in lags):
            raise DataError('External lags must be at least 1.')
        ext = (source, lags)
    first = max((d,) + lags)
    start = first if start is None else start
    if start < first:
        raise DataError(f'Rows must start at or after t = {first} for the lags used.')
    width = 1 + d + len(lags)
    if len(y) - start <= width:
        raise InsufficientDataError(f'A series of length {len(y)} is too short for an order-{d} autoregression '
                                    f'with {len(lags)} external lags.')
    x, target = lagged_design(y, d, start, ext)
    fit = least_squares(x, target)
    if fit.ridge:
        _log.debug(f'Rank-deficient order-{d} design (rank {fit.rank} of {width}); used ridge fallback.')
    return ARModel(intercept=float(fit.coef[0]), phi=fit.coef[1:d + 1], psi=fit.coef[d + 1:], d=d,
                   external_lags=lags, residual_ssr=fit.ssr, n_obs=len(target), rank=fit.rank, ridge=fit.ridge)


def forecast_recursive(model: ARModel, history: np.ndarray, horizon: int) -> np.ndarray:
    """Feed predictions back as lags for ``horizon`` steps (own lags only)."""
    buffer = list(np.asarray(history, dtype=float))
    for _ in range(horizon):
        buffer.append(model.predict_next(np.asarray(buffer)))
    return np.asarray(buffer[len(buffer) - horizon:])
