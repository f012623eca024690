from dataclasses import dataclass

import numpy as np

from ..core.models import InfluenceTensor
from ..exceptions import DataError


@dataclass(frozen=True)
class RecoveryScore:
    precision: float
    recall: float
    lag_accuracy: float


def score_recovery(found: InfluenceTensor, truth: InfluenceTensor) -> RecoveryScore:
    """Precision and recall of the non-zero entries, and how many true positives carry the exact lag.

    With nothing found precision is 1; with nothing to find recall is 1; without true positives lag accuracy is 1.
    """
    if not found.same_axes(truth):
        raise DataError('Found and true tensors have different axes.')
    found_edges = found.lags > 0
    true_edges = truth.lags > 0
    hits = found_edges & true_edges
    n_hits = int(hits.sum())
    precision = n_hits / found_edges.sum() if found_edges.any() else 1.0
    recall = n_hits / true_edges.sum() if true_edges.any() else 1.0
    lag_accuracy = float(np.mean(found.lags[hits] == truth.lags[hits])) if n_hits else 1.0
    return RecoveryScore(precision=float(precision), recall=float(recall), lag_accuracy=lag_accuracy)
