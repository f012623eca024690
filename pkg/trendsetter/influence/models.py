from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..core.models import InfluenceEdge
from ..exceptions import DataError


class InsufficientDataError(DataError):
    """The series is too short for the requested regression."""
    pass


@dataclass(frozen=True)
class ARModel:
    """Least-squares autoregression, optionally with lags of an external series.

    Predicts ``intercept + phi . (y[t-1], ..., y[t-d]) + psi . (x[t-l] for l in external_lags)``.
    """
    intercept: float
    phi: np.ndarray
    d: int
    residual_ssr: float
    n_obs: int
    psi: np.ndarray = field(default_factory=lambda: np.zeros(0))
    external_lags: Tuple[int, ...] = ()
    rank: int = 0
    ridge: bool = False

    def __post_init__(self):
        if len(self.phi) != self.d or len(self.psi) != len(self.external_lags):
            raise DataError('Autoregression coefficients do not match the model order.')
        if self.residual_ssr < 0:
            raise DataError('Residual sum of squares must be non-negative.')

    @property
    def coefficients(self) -> np.ndarray:
        return np.concatenate([[self.intercept], self.phi, self.psi])

    def predict_next(self, history: np.ndarray, external: Optional[np.ndarray] = None) -> float:
        """One-step prediction after the last value of ``history`` (and of ``external``)."""
        own = history[::-1][:self.d]
        value = self.intercept + float(self.phi @ own)
        if self.external_lags:
            value += float(sum(c * external[len(external) - lag] for c, lag in zip(self.psi, self.external_lags)))
        return value


@dataclass(frozen=True)
class GrangerResult:
    """Per-lag outcome of scanning one source against one target.

    Arrays are aligned with ``lags``. ``best_lag`` is the significant lag with the smallest p-value, if any.
    """
    lags: Tuple[int, ...]
    f_stats: np.ndarray
    p_values: np.ndarray
    delta_mse: np.ndarray
    ssr_restricted: float
    ssr_extended: np.ndarray
    n_obs: int
    alpha: float
    best_lag: Optional[int] = None
    flags: Tuple[str, ...] = ()

    @property
    def significant(self) -> bool:
        return self.best_lag is not None

    def _best(self) -> int:
        return self.lags.index(self.best_lag)  # type: ignore[arg-type]

    def edge(self, src: str, dst: str, context: str) -> Optional[InfluenceEdge]:
        if self.best_lag is None:
            return None
        i = self._best()
        return InfluenceEdge(src=src, dst=dst, context=context, lag=self.best_lag,
                             p_value=float(self.p_values[i]), delta_mse=float(self.delta_mse[i]))
