from .metrics import MetricInputError, UndefinedMetricError, mae, mape, mape_detail
from .models import (
    GLOBAL_UNIT, EventLog, EventRecord, GrangerFailure, InfluenceEdge, InfluenceTensor, Split, SplitError,
    Trajectory, TrajectoryKey, as_attribute_matrix, week_index,
)

__all__ = [
    'GLOBAL_UNIT',
    'EventLog',
    'EventRecord',
    'GrangerFailure',
    'InfluenceEdge',
    'InfluenceTensor',
    'MetricInputError',
    'Split',
    'SplitError',
    'Trajectory',
    'TrajectoryKey',
    'UndefinedMetricError',
    'as_attribute_matrix',
    'mae',
    'mape',
    'mape_detail',
    'week_index',
]
