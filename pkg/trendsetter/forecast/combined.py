import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np

from .coherent import CoherentForecaster, forecast_coherent, train_coherent
from .config import ForecastConfig
from .models import Forecasts, stack
from ..core.models import InfluenceTensor
from ..exceptions import DataError
from ..ingest.models import TrajectorySet

_log = logging.getLogger(__name__)

#: Relative slack under which two validation MAEs count as a tie.
_TIE = 1e-12


def alpha_grid(step: float = 0.05) -> np.ndarray:
    return np.round(np.arange(0.0, 1.0 + step / 2, step), 10)


def mix(style_forecast: Forecasts, unit_forecast: Forecasts, alpha: float) -> Forecasts:
    return {key: alpha * style_forecast[key] + (1.0 - alpha) * unit_forecast[key] for key in style_forecast}


def choose_alpha(style_forecast: np.ndarray, unit_forecast: np.ndarray, truth: np.ndarray,
                 grid: Sequence[float]) -> float:
    """Mixing weight with the lowest MAE; ties go to the smaller weight."""
    scores = np.array([np.mean(np.abs(a * style_forecast + (1.0 - a) * unit_forecast - truth)) for a in grid])
    best = scores.min()
    return float(grid[int(np.flatnonzero(scores <= best + _TIE * max(1.0, best))[0])])


@dataclass(frozen=True)
class CombinedForecaster:
    """Weighted mix of a style-influence bank and a unit-influence bank."""
    style_bank: CoherentForecaster
    unit_bank: CoherentForecaster
    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise DataError(f'Mixing weight must lie in [0, 1], got {self.alpha}.')

    def forecast(self, ts: TrajectorySet, horizon: int = 26, origin: Optional[int] = None) -> Forecasts:
        return mix(forecast_coherent(self.style_bank, ts, horizon, origin),
                   forecast_coherent(self.unit_bank, ts, horizon, origin), self.alpha)


def select_alpha(style_bank: CoherentForecaster, unit_bank: CoherentForecaster, ts: TrajectorySet,
                 step: float = 0.05) -> CombinedForecaster:
    """Pick the mixing weight on the validation region, both banks forecasting recursively from its start."""
    if ts.split is None or ts.split.validation < 1:
        raise DataError('Selecting the mixing weight needs a non-empty validation region.')
    split = ts.split
    style_val = forecast_coherent(style_bank, ts, split.validation, origin=split.train_end)
    unit_val = forecast_coherent(unit_bank, ts, split.validation, origin=split.train_end)
    truth = np.stack([ts.series(*key)[split.train_end:split.val_end] for key in style_val])
    alpha = choose_alpha(stack(style_val), stack(unit_val), truth, alpha_grid(step))
    _log.info(f'Selected mixing weight alpha={alpha:.2f} for style influence.')
    return CombinedForecaster(style_bank=style_bank, unit_bank=unit_bank, alpha=alpha)


def train_combined(ts: TrajectorySet, unit_tensor: InfluenceTensor, style_tensor: InfluenceTensor,
                   config: Optional[ForecastConfig] = None, jobs: int = 1) -> CombinedForecaster:
    config = config or ForecastConfig()
    style_bank = train_coherent(ts, style_tensor, config, jobs)
    unit_bank = train_coherent(ts, unit_tensor, config, jobs)
    return select_alpha(style_bank, unit_bank, ts, config.alpha_grid_step)


def ablation_suite(ts: TrajectorySet, unit_tensor: InfluenceTensor, style_tensor: InfluenceTensor,
                   config: Optional[ForecastConfig] = None, horizon: int = 26, jobs: int = 1) -> Dict[str, Forecasts]:
    """Test-region forecasts of the learned variants with parts of the model switched off.

    ``full`` mixes both banks with a selected weight; ``style_only`` and ``unit_only`` fix the weight at 1 and 0.
    ``no_influence`` replaces the discovered relations by every other unit of the style at lag 1, so each network
    sees the whole style at the last step; ``no_influence_no_coherence`` also drops the coherence term.
    """
    config = config or ForecastConfig()
    style_bank = train_coherent(ts, style_tensor, config, jobs)
    unit_bank = train_coherent(ts, unit_tensor, config, jobs)
    full = select_alpha(style_bank, unit_bank, ts, config.alpha_grid_step)
    everyone = InfluenceTensor.full('unit', ts.units, ts.styles)
    plain = train_coherent(ts, everyone, config, jobs)
    independent = train_coherent(ts, everyone, config.copy(update={'coherence': 0.0}), jobs)
    suite = {
        'full': full.forecast(ts, horizon),
        'style_only': forecast_coherent(style_bank, ts, horizon),
        'unit_only': forecast_coherent(unit_bank, ts, horizon),
        'no_influence': forecast_coherent(plain, ts, horizon),
        'no_influence_no_coherence': forecast_coherent(independent, ts, horizon),
    }
    _log.info(f'Ablation suite: full model uses alpha={full.alpha:.2f}.')
    return suite
