from typing import Literal

from pydantic import confloat, conint, root_validator

from trendsetter.config.models import ModuleConfig
from trendsetter.core.models import MAX_LAG


class InfluenceConfig(ModuleConfig):
    """Config for Granger influence discovery"""
    #: Own-lag order of the restricted autoregression.
    order: conint(ge=0) = 8  # type: ignore[valid-type]
    min_lag: conint(ge=1, le=MAX_LAG) = 1  # type: ignore[valid-type]
    max_lag: conint(ge=1, le=MAX_LAG) = MAX_LAG  # type: ignore[valid-type]
    alpha: confloat(gt=0, lt=1) = 0.05  # type: ignore[valid-type]
    #: Bonferroni correction: none, over the scanned lags, or over every test of a tensor build.
    correction: Literal['none', 'lags', 'tensor'] = 'none'
    #: Edge weight used by rankings and graphs.
    weight: Literal['lag', 'delta_mse'] = 'lag'

    @root_validator(skip_on_failure=True)
    def lag_range(cls, values):
        if values['min_lag'] > values['max_lag']:
            raise ValueError(f'min_lag {values["min_lag"]} is above max_lag {values["max_lag"]}.')
        return values

    @property
    def lags(self) -> range:
        return range(self.min_lag, self.max_lag + 1)
