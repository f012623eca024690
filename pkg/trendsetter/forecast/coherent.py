"""Coherent neural forecaster.

One small network per trajectory predicts the next value from the trajectory's own lags plus, for every influence
edge into it, the influencer's value at the edge's lag. Networks of the same style are trained together: besides
each network's squared error, the loss penalises the squared gap between the mean prediction and the mean truth
of the style at every time step of a batch.
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import ForecastConfig
from .models import Forecasts, TrainingDivergedError, UntrainedForecasterError
from ..core.models import InfluenceTensor, TrajectoryKey
from ..exceptions import DataError
from ..ingest.models import TrajectorySet
from ..parallel import ordered_map

_log = logging.getLogger(__name__)

#: Influencer inputs of one trajectory: (row of the influencer, lag) pairs.
InputSpec = List[Tuple[int, int]]

_ADAM_BETAS = (0.9, 0.999)
_ADAM_EPS = 1e-8
_MIN_STD = 1e-8


class MissingInfluencerError(DataError):
    """An influence edge refers to a trajectory that is not in the set."""
    pass


@dataclass
class NetworkParams:
    """Parameters of R one-hidden-layer networks, zero-padded to a common input width."""
    w1: np.ndarray  # (R, W, H)
    b1: np.ndarray  # (R, H)
    w2: np.ndarray  # (R, H)
    b2: np.ndarray  # (R,)

    NAMES = ('w1', 'b1', 'w2', 'b2')

    def arrays(self) -> Dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in self.NAMES}

    def copy(self) -> 'NetworkParams':
        return NetworkParams(**{name: a.copy() for name, a in self.arrays().items()})

    def rows(self, rows) -> 'NetworkParams':
        return NetworkParams(**{name: a[rows].copy() for name, a in self.arrays().items()})

    def assign(self, rows, other: 'NetworkParams') -> None:
        for name, a in self.arrays().items():
            a[rows] = getattr(other, name)

    def finite(self) -> bool:
        return all(np.all(np.isfinite(a)) for a in self.arrays().values())

    def squared_norm(self) -> float:
        return float(sum((a ** 2).sum() for a in self.arrays().values()))


def sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def forward(params: NetworkParams, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Hidden activations (R, B, H) and standardized outputs (R, B) for inputs ``x`` of shape (R, B, W)."""
    hidden = sigmoid(np.matmul(x, params.w1) + params.b1[:, None, :])
    out = np.matmul(hidden, params.w2[:, :, None])[:, :, 0] + params.b2[:, None]
    return hidden, out


def coherence_gap(predicted: np.ndarray, truth: np.ndarray) -> np.ndarray:
    """Per time step, mean prediction minus mean truth over the networks of one style."""
    return predicted.mean(axis=0) - truth.mean(axis=0)


def coherent_loss(params: NetworkParams, x: np.ndarray, y: np.ndarray, mu: np.ndarray, sd: np.ndarray,
                  coherence: float, l2: float) -> Tuple[float, NetworkParams, np.ndarray]:
    """Loss, gradients and predictions for one batch of one style.

    ``y`` and the returned predictions are in the original scale, shape (R, B).
    """
    batch = x.shape[1]
    rows = x.shape[0]
    hidden, out = forward(params, x)
    predicted = mu[:, None] + sd[:, None] * out
    error = predicted - y
    gap = coherence_gap(predicted, y)
    loss = ((error ** 2).sum() + coherence * (gap ** 2).sum()) / batch + l2 * params.squared_norm()

    d_pred = (2.0 * error + coherence * 2.0 * gap[None, :] / rows) / batch
    d_out = d_pred * sd[:, None]
    d_hidden = d_out[:, :, None] * params.w2[:, None, :]
    d_act = d_hidden * hidden * (1.0 - hidden)
    grads = NetworkParams(
        w1=np.matmul(x.transpose(0, 2, 1), d_act) + 2.0 * l2 * params.w1,
        b1=d_act.sum(axis=1) + 2.0 * l2 * params.b1,
        w2=(d_out[:, :, None] * hidden).sum(axis=1) + 2.0 * l2 * params.w2,
        b2=d_out.sum(axis=1) + 2.0 * l2 * params.b2,
    )
    return float(loss), grads, predicted


class Adam:
    """Adam steps applied only to the networks flagged active."""

    def __init__(self, params: NetworkParams, lr: float):
        self.lr = lr
        self.step_count = 0
        self.m = {name: np.zeros_like(a) for name, a in params.arrays().items()}
        self.v = {name: np.zeros_like(a) for name, a in params.arrays().items()}

    def step(self, params: NetworkParams, grads: NetworkParams, active: np.ndarray) -> None:
        beta1, beta2 = _ADAM_BETAS
        self.step_count += 1
        for name, value in params.arrays().items():
            g = getattr(grads, name)
            m, v = self.m[name], self.v[name]
            m[active] = beta1 * m[active] + (1.0 - beta1) * g[active]
            v[active] = beta2 * v[active] + (1.0 - beta2) * g[active] ** 2
            m_hat = m[active] / (1.0 - beta1 ** self.step_count)
            v_hat = v[active] / (1.0 - beta2 ** self.step_count)
            value[active] -= self.lr * m_hat / (np.sqrt(v_hat) + _ADAM_EPS)


def influencer_inputs(ts: TrajectorySet, tensor: InfluenceTensor) -> List[InputSpec]:
    """Influencer (row, lag) pairs for every trajectory, rows in style-major order."""
    n_units = len(ts.units)
    inputs: List[InputSpec] = [[] for _ in range(len(ts.styles) * n_units)]

    def row(style: str, unit: str) -> int:
        if style not in ts.styles or unit not in ts.units:
            raise MissingInfluencerError(f'Influence edge refers to trajectory ({style}, {unit}) which is not in '
                                         f'the set.')
        return ts.styles.index(style) * n_units + ts.units.index(unit)

    for edge in tensor.edges():
        if tensor.axis == 'unit':
            dst, src = row(edge.context, edge.dst), row(edge.context, edge.src)
        elif tensor.axis == 'style':
            dst, src = row(edge.dst, edge.context), row(edge.src, edge.context)
        else:
            raise DataError(f'A {tensor.axis} tensor cannot drive a forecaster.')
        inputs[dst].append((src, edge.lag))
    return inputs


def build_features(values: np.ndarray, inputs: Sequence[InputSpec], mu: np.ndarray, sd: np.ndarray, d: int,
                   targets: np.ndarray, width: int) -> np.ndarray:
    """Standardized inputs (R, len(targets), width) for predicting ``values[:, tau]`` for every tau in ``targets``."""
    z = (values - mu[:, None]) / sd[:, None]
    x = np.zeros((values.shape[0], len(targets), width))
    for k in range(1, d + 1):
        x[:, :, k - 1] = z[:, targets - k]
    for r, spec in enumerate(inputs):
        for c, (q, lag) in enumerate(spec):
            x[r, :, d + c] = z[q, targets - lag]
    return x


@dataclass
class CoherentForecaster:
    """A bank of per-trajectory networks trained on one influence tensor."""
    styles: Tuple[str, ...]
    units: Tuple[str, ...]
    axis: str
    inputs: List[InputSpec]
    d: int
    hidden: int
    coherence: float
    mu: np.ndarray
    sd: np.ndarray
    params: Optional[NetworkParams] = None
    validation_mae: np.ndarray = field(default_factory=lambda: np.zeros(0))
    epochs: Dict[str, int] = field(default_factory=dict)
    loss_history: Dict[str, Tuple[float, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.inputs) != len(self.styles) * len(self.units):
            raise DataError('Input specification does not cover every trajectory.')

    @property
    def trained(self) -> bool:
        return self.params is not None

    @property
    def keys(self) -> List[TrajectoryKey]:
        return [(s, u) for s in self.styles for u in self.units]

    @property
    def width(self) -> int:
        return self.d + max((len(spec) for spec in self.inputs), default=0)

    @property
    def start(self) -> int:
        """First time index with every input available."""
        return max([self.d, 1] + [lag for spec in self.inputs for _, lag in spec])

    def features(self, values: np.ndarray, targets: np.ndarray) -> np.ndarray:
        return build_features(values, self.inputs, self.mu, self.sd, self.d, targets, self.width)

    def predict(self, values: np.ndarray, targets: np.ndarray) -> np.ndarray:
        """One-step predictions (R, len(targets)) from observed inputs."""
        if self.params is None:
            raise UntrainedForecasterError('The coherent forecaster has not been trained.')
        _, out = forward(self.params, self.features(values, targets))
        return self.mu[:, None] + self.sd[:, None] * out


def _flatten(ts: TrajectorySet) -> np.ndarray:
    return ts.values.reshape(len(ts.styles) * len(ts.units), ts.length)


def _init_params(rngs: Sequence[np.random.Generator], widths: Sequence[int], width: int, hidden: int,
                 zero_output: bool) -> NetworkParams:
    rows = len(rngs)
    params = NetworkParams(w1=np.zeros((rows, width, hidden)), b1=np.zeros((rows, hidden)),
                           w2=np.zeros((rows, hidden)), b2=np.zeros(rows))
    for r, (rng, w) in enumerate(zip(rngs, widths)):
        params.w1[r, :w] = rng.normal(0.0, 1.0 / np.sqrt(max(w, 1)), size=(w, hidden))
        output = rng.normal(0.0, 1.0 / np.sqrt(hidden), size=hidden)
        if not zero_output:
            params.w2[r] = output
    return params


class _Diverged(Exception):
    pass


def _train_style(bank: CoherentForecaster, values: np.ndarray, style_index: int, train_end: int, val_end: int,
                 config: ForecastConfig) -> Tuple[NetworkParams, np.ndarray, int, Tuple[float, ...]]:
    n_units = len(bank.units)
    rows = np.arange(style_index * n_units, (style_index + 1) * n_units)
    widths = [bank.d + len(bank.inputs[r]) for r in rows]
    train_targets = np.arange(bank.start, train_end)
    val_targets = np.arange(train_end, val_end)
    x_train = bank.features(values, train_targets)[rows]
    y_train = values[rows][:, train_targets]
    x_val = bank.features(values, val_targets)[rows]
    y_val = values[rows][:, val_targets]
    mu, sd = bank.mu[rows], bank.sd[rows]

    order_rng = np.random.default_rng(np.random.SeedSequence([config.seed, style_index]))
    net_rngs = [np.random.default_rng(np.random.SeedSequence([config.seed, style_index, u])) for u in range(n_units)]
    batch_size = config.batch_size or len(train_targets)

    def attempt() -> Tuple[NetworkParams, np.ndarray, int, Tuple[float, ...]]:
        params = _init_params(net_rngs, widths, bank.width, bank.hidden, config.zero_output_init)
        optimizer = Adam(params, config.lr)
        best, best_mae = params.copy(), np.full(n_units, np.inf)
        wait = np.zeros(n_units, dtype=int)
        active = np.ones(n_units, dtype=bool)
        history: List[float] = []
        epoch = 0
        for epoch in range(1, config.max_epochs + 1):
            order = order_rng.permutation(len(train_targets))
            for begin in range(0, len(order), batch_size):
                batch = order[begin:begin + batch_size]
                loss, grads, _ = coherent_loss(params, x_train[:, batch], y_train[:, batch], mu, sd,
                                               bank.coherence, config.l2)
                if not np.isfinite(loss):
                    raise _Diverged(f'loss became {loss} in epoch {epoch}')
                optimizer.step(params, grads, active)
            if not params.finite():
                raise _Diverged(f'parameters became non-finite in epoch {epoch}')
            history.append(coherent_loss(params, x_train, y_train, mu, sd, bank.coherence, config.l2)[0])
            _, out = forward(params, x_val)
            val_mae = np.abs(mu[:, None] + sd[:, None] * out - y_val).mean(axis=1)
            improved = active & (val_mae < best_mae)
            best.assign(improved, params.rows(improved))
            best_mae[improved] = val_mae[improved]
            wait[improved] = 0
            wait[active & ~improved] += 1
            active &= wait < config.patience
            if not active.any():
                break
        return best, best_mae, epoch, tuple(history)

    try:
        return attempt()
    except _Diverged as e:
        _log.warning(f'Style {bank.styles[style_index]}: training diverged ({e}); reinitialising once.')
    try:
        return attempt()
    except _Diverged as e:
        raise TrainingDivergedError(f'Training style {bank.styles[style_index]} diverged twice: {e}.') from e


def train_coherent(ts: TrajectorySet, tensor: InfluenceTensor, config: Optional[ForecastConfig] = None,
                   jobs: int = 1) -> CoherentForecaster:
    """Train one network per trajectory on the train region, stopping early on validation MAE.

    Styles train independently and in parallel; within a style the coherence term couples the networks.
    """
    config = config or ForecastConfig()
    if ts.split is None:
        raise DataError('Training the coherent forecaster needs train / validation / test boundaries.')
    split = ts.split
    if split.validation < 1:
        raise DataError('Training the coherent forecaster needs a non-empty validation region.')
    values = _flatten(ts)
    train = values[:, :split.train_end]
    mu = train.mean(axis=1)
    sd = train.std(axis=1)
    sd = np.where(sd < _MIN_STD, 1.0, sd)
    bank = CoherentForecaster(styles=ts.styles, units=ts.units, axis=tensor.axis,
                              inputs=influencer_inputs(ts, tensor), d=config.order, hidden=config.hidden,
                              coherence=config.coherence, mu=mu, sd=sd)
    if split.train_end - bank.start < 1:
        raise DataError(f'The train region ({split.train_end} steps) is too short for inputs reaching back '
                        f'{bank.start} steps.')

    results = ordered_map(lambda s: _train_style(bank, values, s, split.train_end, split.val_end, config),
                          range(len(ts.styles)), jobs)
    params = NetworkParams(w1=np.concatenate([r[0].w1 for r in results]),
                           b1=np.concatenate([r[0].b1 for r in results]),
                           w2=np.concatenate([r[0].w2 for r in results]),
                           b2=np.concatenate([r[0].b2 for r in results]))
    n_edges = sum(len(spec) for spec in bank.inputs)
    for style, (_, val_mae, epochs, _) in zip(ts.styles, results):
        _log.debug(f'Style {style}: stopped after {epochs} epochs, validation MAE {val_mae.mean():.6g}.')
    _log.info(f'Trained {values.shape[0]} networks ({bank.axis} influence, {n_edges} influencer inputs).')
    return replace(bank, params=params, validation_mae=np.concatenate([r[1] for r in results]),
                   epochs={s: r[2] for s, r in zip(ts.styles, results)},
                   loss_history={s: r[3] for s, r in zip(ts.styles, results)})


def forecast_coherent(bank: CoherentForecaster, ts: TrajectorySet, horizon: int = 26,
                      origin: Optional[int] = None) -> Forecasts:
    """Advance every trajectory one step at a time, feeding predictions back as own and influencer lags.

    Forecasts start at ``origin`` (default: the start of the test region) and only use values before it.
    """
    if not bank.trained:
        raise UntrainedForecasterError('The coherent forecaster has not been trained.')
    if (ts.styles, ts.units) != (bank.styles, bank.units):
        raise DataError('The trajectory set does not match the one the forecaster was trained on.')
    if horizon < 1:
        raise DataError(f'Forecast horizon must be at least 1, got {horizon}.')
    origin = ts.history_end if origin is None else origin
    if origin < bank.start:
        raise DataError(f'Forecast origin {origin} leaves too little history for inputs reaching back '
                        f'{bank.start} steps.')
    values = _flatten(ts)
    buffer = np.zeros((values.shape[0], origin + horizon))
    buffer[:, :origin] = values[:, :origin]
    for tau in range(origin, origin + horizon):
        buffer[:, tau] = bank.predict(buffer, np.array([tau]))[:, 0]
    return {key: buffer[r, origin:] for r, key in enumerate(bank.keys)}
