import logging
from typing import Optional

import numpy as np

from .config import StylesConfig
from .models import StyleFitError, StyleModel

_log = logging.getLogger(__name__)

_EPS = 1e-12


def fit_nmf(data, k: int, seed: int = 0, config: Optional[StylesConfig] = None) -> StyleModel:
    """Factorize non-negative data V (n x M) into H (n x K) times W (K x M) with multiplicative updates.

    Minimizes the squared Frobenius reconstruction error, which never increases under the updates. Stops when the
    relative improvement drops below ``config.tol`` or after ``config.max_iter`` iterations.
    """
    config = config or StylesConfig()
    v = np.atleast_2d(np.asarray(data, dtype=float))
    if v.ndim != 2 or v.size == 0 or not np.all(np.isfinite(v)):
        raise StyleFitError('Factorization needs a finite, non-empty 2-d matrix.')
    if v.min() < 0:
        raise StyleFitError('Factorization needs non-negative inputs.')
    n, m = v.shape
    if not 1 <= k <= min(m, n):
        raise StyleFitError(f'Number of styles must be between 1 and {min(m, n)}, got {k}.')

    if not v.any():
        _log.warning('All attribute vectors are zero; returning zero factors.')
        return StyleModel(kind='nmf', k=k, m=m, components=np.zeros((k, m)), scales=np.zeros(k), trace=(0.0,))

    rng = np.random.default_rng(seed)
    scale = np.sqrt(v.mean() / k)
    h = rng.uniform(0.01, 1.0, size=(n, k)) * scale
    w = rng.uniform(0.01, 1.0, size=(k, m)) * scale

    total = float(np.sum(v ** 2))
    previous = float(np.sum((v - h @ w) ** 2))
    trace = []
    for iteration in range(config.max_iter):
        h *= (v @ w.T) / (h @ (w @ w.T) + _EPS)
        w *= (h.T @ v) / ((h.T @ h) @ w + _EPS)
        error = float(np.sum((v - h @ w) ** 2))
        trace.append(error)
        if error <= 1e-30 * total or (previous - error) / previous < config.tol:
            _log.debug(f'Factorization converged after {iteration + 1} iterations, error {error:.6g}.')
            break
        previous = error
    else:
        _log.warning(f'Factorization stopped at the iteration limit ({config.max_iter}) before converging.')

    scales = w.sum(axis=1)
    components = np.divide(w, scales[:, None], out=np.zeros_like(w), where=scales[:, None] > 0)
    _log.info(f'Factorized {n} vectors of {m} attributes into {k} styles, error {trace[-1]:.6g}.')
    return StyleModel(kind='nmf', k=k, m=m, components=components, scales=scales, trace=tuple(trace))
