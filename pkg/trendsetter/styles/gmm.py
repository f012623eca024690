import logging
from typing import Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from .config import StylesConfig
from .models import StyleFitError, StyleModel
from ..core.models import as_attribute_matrix
from ..exceptions import NumericalError

_log = logging.getLogger(__name__)

#: Allowed round-off when asserting that EM never lowers the log-likelihood.
_MONOTONE_SLACK = 1e-9


def fit_gmm(data, k: int, seed: int = 0, config: Optional[StylesConfig] = None) -> StyleModel:
    """Fit a diagonal-covariance Gaussian mixture with EM.

    Iterates until the mean per-row log-likelihood improves by less than ``config.tol`` or ``config.max_iter``
    iterations have run. Identical rows produce a floor-variance model and a warning.
    """
    config = config or StylesConfig()
    x = as_attribute_matrix(data)
    n, m = x.shape
    if k < 1:
        raise StyleFitError('A mixture needs at least one component.')
    if n < 10 * k:
        raise StyleFitError(f'Fitting {k} components needs at least {10 * k} vectors, got {n}.')

    floor = config.variance_floor
    if np.all(x == x[0]):
        _log.warning('All attribute vectors are identical; returning a variance-floor mixture.')
        return StyleModel(kind='gmm', k=k, m=m, weights=np.full(k, 1.0 / k), means=np.tile(x[0], (k, 1)),
                          variances=np.full((k, m), floor))

    rng = np.random.default_rng(seed)
    centers = _kmeans_plus_plus(x, k, rng, config.kmeans_subsample)
    distances = (x ** 2).sum(axis=1)[:, None] - 2.0 * x @ centers.T + (centers ** 2).sum(axis=1)[None, :]
    responsibilities = np.eye(k)[np.argmin(distances, axis=1)]
    fallback = (centers, np.tile(np.maximum(x.var(axis=0), floor), (k, 1)))
    weights, means, variances = _m_step(x, responsibilities, floor, fallback)

    trace = []
    previous = -np.inf
    for iteration in range(config.max_iter):
        model = StyleModel(kind='gmm', k=k, m=m, weights=weights, means=means, variances=variances)
        joint = model.log_joint(x)
        row_ll = logsumexp(joint, axis=1)
        ll = float(row_ll.mean())
        if ll < previous - _MONOTONE_SLACK * max(1.0, abs(previous)):
            raise NumericalError(f'EM log-likelihood decreased at iteration {iteration}: {previous} -> {ll}.')
        trace.append(ll * n)
        if ll - previous < config.tol:
            _log.debug(f'EM converged after {iteration + 1} iterations, log-likelihood {ll * n:.6g}.')
            break
        previous = ll
        responsibilities = np.exp(joint - row_ll[:, None])
        weights, means, variances = _m_step(x, responsibilities, floor, (means, variances))
    else:
        _log.warning(f'EM stopped at the iteration limit ({config.max_iter}) before converging.')

    _log.info(f'Fitted a {k}-component mixture on {n} vectors of {m} attributes.')
    return StyleModel(kind='gmm', k=k, m=m, weights=weights, means=means, variances=variances, trace=tuple(trace))


def _m_step(x: np.ndarray, responsibilities: np.ndarray, floor: float,
            previous: Tuple[np.ndarray, np.ndarray]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = x.shape[0]
    counts = responsibilities.sum(axis=0)
    weights = counts / counts.sum()
    alive = counts > 1e-10 * n
    means, variances = previous[0].copy(), previous[1].copy()
    safe = np.where(alive, counts, 1.0)[:, None]
    new_means = responsibilities.T @ x / safe
    new_variances = responsibilities.T @ (x ** 2) / safe - new_means ** 2
    # Components without members keep their last parameters; their weight is zero either way.
    means[alive] = new_means[alive]
    variances[alive] = np.maximum(new_variances[alive], floor)
    return weights, means, variances


def _kmeans_plus_plus(x: np.ndarray, k: int, rng: np.random.Generator, subsample: int) -> np.ndarray:
    """D^2-weighted seeding of k centers on a row subsample."""
    n = x.shape[0]
    rows = np.sort(rng.choice(n, size=min(n, max(subsample, k)), replace=False))
    pool = x[rows]
    centers = [pool[rng.integers(len(pool))]]
    closest = ((pool - centers[0]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            index = rng.choice(len(pool), p=closest / total)
        else:
            index = rng.integers(len(pool))
        centers.append(pool[index])
        closest = np.minimum(closest, ((pool - pool[index]) ** 2).sum(axis=1))
    return np.vstack(centers)
