from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import nnls
from scipy.special import logsumexp

from ..core.models import as_attribute_matrix
from ..exceptions import DataError


class StyleFitError(DataError):
    """Style model cannot be fitted on the given data."""
    pass


def _frozen(values: Optional[np.ndarray]) -> Optional[np.ndarray]:
    if values is None:
        return None
    values = np.array(values, dtype=float)
    values.setflags(write=False)
    return values


@dataclass(frozen=True)
class StyleModel:
    """K styles over M attributes with posterior inference.

    A ``gmm`` model holds mixture ``weights`` (K), ``means`` and diagonal ``variances`` (K x M).
    An ``nmf`` model holds ``components`` (K x M), each row normalized to sum to one, and the ``scales`` that
    were divided out.
    """
    kind: str
    k: int
    m: int
    weights: Optional[np.ndarray] = None
    means: Optional[np.ndarray] = None
    variances: Optional[np.ndarray] = None
    components: Optional[np.ndarray] = None
    scales: Optional[np.ndarray] = None
    #: Log-likelihood (gmm) or squared reconstruction error (nmf) after every iteration of the fit.
    trace: Tuple[float, ...] = field(default=(), compare=False)

    def __post_init__(self):
        for name in ('weights', 'means', 'variances', 'components', 'scales'):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        if self.kind == 'gmm':
            if self.weights is None or self.means is None or self.variances is None:
                raise StyleFitError('A mixture style model needs weights, means and variances.')
            if self.means.shape != (self.k, self.m) or self.variances.shape != (self.k, self.m):
                raise StyleFitError('Mixture parameter shapes do not match K x M.')
            if abs(self.weights.sum() - 1.0) > 1e-9 or self.weights.min() < 0:
                raise StyleFitError('Mixture weights must form a probability simplex.')
            if self.variances.min() <= 0:
                raise StyleFitError('Mixture variances must be positive.')
        elif self.kind == 'nmf':
            if self.components is None or self.components.shape != (self.k, self.m):
                raise StyleFitError('A factorization style model needs K x M components.')
            if self.components.min() < 0:
                raise StyleFitError('Factorization components must be non-negative.')
            if self.scales is None:
                object.__setattr__(self, 'scales', _frozen(np.ones(self.k)))
        else:
            raise StyleFitError(f'Unknown style model kind "{self.kind}".')

    @property
    def reconstruction_error(self) -> float:
        return self.trace[-1] if self.trace else float('nan')

    def log_joint(self, data: np.ndarray) -> np.ndarray:
        """log w_k + log N(x | mean_k, diag(var_k)) for every row of ``data``."""
        inv = 1.0 / self.variances  # type: ignore[operator]
        quad = (data ** 2) @ inv.T - 2.0 * data @ (self.means * inv).T + np.sum(self.means ** 2 * inv, axis=1)
        log_det = np.sum(np.log(2.0 * np.pi * self.variances), axis=1)  # type: ignore[arg-type]
        with np.errstate(divide='ignore'):
            log_weights = np.log(self.weights)  # type: ignore[arg-type]
        return log_weights - 0.5 * (quad + log_det)

    def posterior_matrix(self, data) -> np.ndarray:
        """Style posteriors p(S | x) for every attribute vector; each row lies on the simplex."""
        data = as_attribute_matrix(data, self.m)
        if self.kind == 'gmm':
            joint = self.log_joint(data)
            return np.exp(joint - logsumexp(joint, axis=1, keepdims=True))
        return np.vstack([self._affinity(row) for row in data])

    def posterior(self, attrs) -> np.ndarray:
        return self.posterior_matrix(attrs)[0]

    def _affinity(self, attrs: np.ndarray) -> np.ndarray:
        coefficients, _ = nnls(self.components.T, attrs)  # type: ignore[union-attr]
        total = coefficients.sum()
        if total <= 0:
            return np.full(self.k, 1.0 / self.k)
        return coefficients / total
