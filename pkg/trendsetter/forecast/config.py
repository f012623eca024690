from typing import List, Optional, Tuple

from pydantic import confloat, conint, validator

from trendsetter.config.models import ModuleConfig

#: Learned variants compared by the ablation suite.
ABLATIONS = ['full', 'style_only', 'unit_only', 'no_influence', 'no_influence_no_coherence']

DEFAULT_MODELS = [
    'gaussian', 'seasonal', 'mean', 'last', 'drift', 'ar', 'arima', 'expsmooth', 'geomodel',
    'var_units', 'var_styles', 'coherent_unit', 'coherent_style', 'combined',
]


class ForecastConfig(ModuleConfig):
    """Config for baselines and the coherent forecaster"""
    #: Own-lag order of autoregressive models and of the networks' inputs.
    order: conint(ge=0) = 8  # type: ignore[valid-type]
    hidden: conint(ge=1) = 16  # type: ignore[valid-type]
    lr: confloat(gt=0) = 1e-2  # type: ignore[valid-type]
    l2: confloat(ge=0) = 1e-8  # type: ignore[valid-type]
    #: Weight of the per-style coherence term; 0 trains every network independently.
    coherence: confloat(ge=0) = 1.0  # type: ignore[valid-type]
    patience: conint(ge=1) = 50  # type: ignore[valid-type]
    max_epochs: conint(ge=1) = 2000  # type: ignore[valid-type]
    #: Time steps per optimisation batch; None trains on the full train region at once.
    batch_size: Optional[conint(ge=1)] = 32  # type: ignore[valid-type]
    seed: int = 0
    zero_output_init: bool = False
    alpha_grid_step: confloat(gt=0, le=1) = 0.05  # type: ignore[valid-type]
    arima_order: Tuple[conint(ge=0), conint(ge=0), conint(ge=0)] = (1, 1, 1)  # type: ignore[valid-type]
    horizon: conint(ge=1) = 26  # type: ignore[valid-type]
    season: conint(ge=2) = 52  # type: ignore[valid-type]
    models: List[str] = DEFAULT_MODELS

    @validator('models', each_item=True)
    def known_model(cls, v: str) -> str:
        if v not in DEFAULT_MODELS and v not in ABLATIONS:
            raise ValueError(f'Unknown model "{v}".')
        return v

