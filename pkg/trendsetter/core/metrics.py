import logging
from typing import Sequence, Tuple

import numpy as np

from ..exceptions import DataError, NumericalError

_log = logging.getLogger(__name__)

#: Ground-truth magnitudes below this are left out of MAPE.
MAPE_ZERO_TOLERANCE = 1e-6


class MetricInputError(DataError):
    """Metric inputs have mismatched lengths or non-finite values."""
    pass


class UndefinedMetricError(NumericalError):
    """The metric has no defined value for these inputs."""
    pass


def _pair(predicted: Sequence[float], truth: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    predicted = np.asarray(predicted, dtype=float).ravel()
    truth = np.asarray(truth, dtype=float).ravel()
    if len(predicted) != len(truth):
        raise MetricInputError(f'Predicted and true sequences differ in length ({len(predicted)} vs {len(truth)}).')
    if len(truth) == 0:
        raise MetricInputError('Cannot score empty sequences.')
    if not (np.all(np.isfinite(predicted)) and np.all(np.isfinite(truth))):
        raise MetricInputError('Cannot score sequences with NaN or infinite values.')
    return predicted, truth


def mae(predicted: Sequence[float], truth: Sequence[float]) -> float:
    """Mean absolute error."""
    predicted, truth = _pair(predicted, truth)
    return float(np.mean(np.abs(predicted - truth)))


def mape_detail(predicted: Sequence[float], truth: Sequence[float]) -> Tuple[float, int]:
    """Mean absolute percentage error and the number of near-zero truth entries that were skipped."""
    predicted, truth = _pair(predicted, truth)
    keep = np.abs(truth) >= MAPE_ZERO_TOLERANCE
    skipped = int(len(truth) - keep.sum())
    if not keep.any():
        raise UndefinedMetricError('MAPE is undefined: every true value is zero.')
    if skipped:
        _log.debug(f'MAPE skipped {skipped} of {len(truth)} near-zero true values.')
    return float(100.0 * np.mean(np.abs((predicted[keep] - truth[keep]) / truth[keep]))), skipped


def mape(predicted: Sequence[float], truth: Sequence[float]) -> float:
    """Mean absolute percentage error over true values that are not (near) zero."""
    return mape_detail(predicted, truth)[0]
