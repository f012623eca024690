import logging
from typing import Iterable, Optional

import numpy as np
from scipy.special import betainc

from .autoregression import lagged_design, least_squares
from .config import InfluenceConfig
from .models import GrangerResult, InsufficientDataError
from ..core.models import InfluenceEdge
from ..exceptions import DataError, NumericalError

_log = logging.getLogger(__name__)

#: Targets whose range is below this are treated as constant.
CONSTANT_TOLERANCE = 1e-12
#: Relative slack allowed when asserting that the extended fit does not lose to the restricted one.
_NESTED_SLACK = 1e-9
_TINY = float(np.finfo(float).tiny)


def f_survival(f: float, df1: int, df2: int) -> float:
    """P(F >= f) for an F(df1, df2) variable, via the regularized incomplete beta function."""
    if f <= 0:
        return 1.0
    if not np.isfinite(f):
        return 0.0
    return float(betainc(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f)))


def effective_alpha(alpha: float, n_lags: int, correction: str = 'none', n_tests: int = 1) -> float:
    if correction == 'none':
        return alpha
    if correction == 'lags':
        return alpha / n_lags
    if correction == 'tensor':
        return alpha / (n_lags * max(n_tests, 1))
    raise DataError(f'Unknown correction "{correction}".')


def granger_scan(target, source, d: int = 8, lags: Iterable[int] = range(1, 9), alpha: float = 0.05,
                 correction: str = 'none') -> GrangerResult:
    """Test whether single lags of ``source`` improve an order-``d`` autoregression of ``target``.

    Every candidate lag is fitted on the same rows, so the restricted model is shared. The extended model adds one
    column, the source at that lag. A column that adds no rank to the design carries no new information and counts
    as no improvement.
    """
    y = np.asarray(target, dtype=float).ravel()
    x = np.asarray(source, dtype=float).ravel()
    lags = tuple(sorted(set(int(lag) for lag in lags)))
    if len(y) != len(x):
        raise DataError(f'Target and source differ in length ({len(y)} vs {len(x)}).')
    if not lags or lags[0] < 1:
        raise DataError('Granger lags must be a non-empty set of positive integers.')
    start = max(d, lags[-1])
    n = len(y) - start
    k_full = d + 2
    if n - k_full < 1:
        raise InsufficientDataError(f'A series of length {len(y)} is too short for order {d} and lag {lags[-1]}.')
    threshold = effective_alpha(alpha, len(lags), correction)

    size = len(lags)
    f_stats, p_values = np.zeros(size), np.ones(size)
    delta, ssr_full = np.zeros(size), np.zeros(size)

    if np.ptp(y) < CONSTANT_TOLERANCE:
        _log.debug('Constant target; no influence is possible.')
        return GrangerResult(lags=lags, f_stats=f_stats, p_values=p_values, delta_mse=delta, ssr_restricted=0.0,
                             ssr_extended=ssr_full, n_obs=n, alpha=threshold, flags=('constant_target',))

    design, response = lagged_design(y, d, start)
    restricted = least_squares(design, response, ridge=0.0)
    ssr_full[:] = restricted.ssr
    flags = []
    if restricted.ssr <= CONSTANT_TOLERANCE ** 2 * max(1.0, float(response @ response)):
        flags.append('exact_restricted')
    else:
        for i, lag in enumerate(lags):
            extended_design = np.column_stack([design, x[start - lag:len(x) - lag]])
            extended = least_squares(extended_design, response, ridge=0.0)
            if extended.rank <= restricted.rank:
                flags.append(f'collinear_lag_{lag}')
                continue
            if extended.ssr > restricted.ssr + _NESTED_SLACK * max(1.0, restricted.ssr):
                raise NumericalError(f'Extended fit at lag {lag} has larger SSR than the restricted fit '
                                     f'({extended.ssr} > {restricted.ssr}).')
            improvement = max(restricted.ssr - extended.ssr, 0.0)
            df2 = n - extended.rank
            ssr_full[i] = min(extended.ssr, restricted.ssr)
            delta[i] = improvement / n
            if extended.ssr <= _TINY * n:
                f_stats[i] = np.inf if improvement > 0 else 0.0
            else:
                f_stats[i] = improvement / (extended.ssr / df2)
            p_values[i] = max(f_survival(f_stats[i], 1, df2), _TINY)

    significant = np.flatnonzero(p_values < threshold)
    best_lag: Optional[int] = None
    if significant.size:
        # argmin returns the first minimum, i.e. the smallest lag among ties.
        best_lag = lags[int(significant[np.argmin(p_values[significant])])]
    return GrangerResult(lags=lags, f_stats=f_stats, p_values=p_values, delta_mse=delta,
                         ssr_restricted=restricted.ssr, ssr_extended=ssr_full, n_obs=n, alpha=threshold,
                         best_lag=best_lag, flags=tuple(flags))


def granger_test(target, source, d: int = 8, lags: Iterable[int] = range(1, 9), alpha: float = 0.05,
                 correction: str = 'none', src: str = 'source', dst: str = 'target',
                 context: str = '') -> Optional[InfluenceEdge]:
    """The influence edge from ``source`` to ``target``, or None when no lag is significant."""
    return granger_scan(target, source, d, lags, alpha, correction).edge(src, dst, context)


def scan_with_config(target, source, config: InfluenceConfig, n_tests: int = 1) -> GrangerResult:
    alpha = effective_alpha(config.alpha, len(config.lags), config.correction, n_tests)
    return granger_scan(target, source, config.order, config.lags, alpha)
