import logging
from typing import Optional, Tuple

import numpy as np

from .config import SynthConfig
from ..core.models import InfluenceTensor, Split
from ..ingest.models import TrajectorySet

_log = logging.getLogger(__name__)

#: Range every generated trajectory is rescaled to.
LOW, HIGH = 0.1, 0.9


def simulate(config: SynthConfig) -> np.ndarray:
    """Raw (styles, units, T) series before rescaling, burn-in already dropped.

    Every trajectory draws its start value and noise from its own sub-seed of ``config.seed``; the style trends
    come from further sub-seeds after those.
    """
    n_styles, n_units = config.styles, config.units
    steps = config.burn_in + config.length
    streams = np.random.SeedSequence(config.seed).spawn(n_styles * n_units + n_styles)
    start = np.empty((n_styles, n_units))
    noise = np.empty((n_styles, n_units, steps))
    for n, stream in enumerate(streams[:n_styles * n_units]):
        rng = np.random.default_rng(stream)
        s, u = divmod(n, n_units)
        start[s, u] = config.initial_std * rng.standard_normal()
        noise[s, u] = config.noise_std * rng.standard_normal(steps)
    trend = np.zeros((n_styles, steps))
    if config.trend_std:
        for s, stream in enumerate(streams[n_styles * n_units:]):
            shocks = config.trend_std * np.random.default_rng(stream).standard_normal(steps)
            for t in range(1, steps):
                trend[s, t] = config.trend_coefficient * trend[s, t - 1] + shocks[t]

    units, styles = config.unit_ids, config.style_ids
    terms = []
    for edge in config.planted_edges:
        if config.edge_axis(edge) == 'unit':
            dst, src = (styles.index(edge.context), units.index(edge.dst)), (styles.index(edge.context),
                                                                                units.index(edge.src))
        else:
            dst, src = (styles.index(edge.dst), units.index(edge.context)), (styles.index(edge.src),
                                                                                units.index(edge.context))
        terms.append((dst, src, edge.lag, edge.coefficient,
                      max(edge.lag, config.burn_in + edge.start) if edge.start else edge.lag))

    x = np.zeros((n_styles, n_units, steps))
    x[:, :, 0] = start
    season = config.seasonal_amplitude * np.sin(2.0 * np.pi * np.arange(steps) / config.seasonal_period)
    for t in range(1, steps):
        x[:, :, t] = config.ar_coefficient * x[:, :, t - 1] + season[t] + trend[:, t, None] + noise[:, :, t]
        for dst, src, lag, coefficient, first in terms:
            if t >= first:
                x[dst + (t,)] += coefficient * x[src + (t - lag,)]
    return x[:, :, config.burn_in:]


def rescale(x: np.ndarray) -> np.ndarray:
    """Affinely map each trajectory onto [LOW, HIGH]; constant trajectories map to the midpoint."""
    lo = x.min(axis=-1, keepdims=True)
    span = x.max(axis=-1, keepdims=True) - lo
    flat = span == 0
    scaled = LOW + (HIGH - LOW) * (x - lo) / np.where(flat, 1.0, span)
    return np.where(flat, 0.5 * (LOW + HIGH), scaled)


def ground_truth(config: SynthConfig, axis: Optional[str] = None) -> InfluenceTensor:
    """Tensor of the edges planted on ``axis``, the generator's own axis by default."""
    axis = axis or config.axis
    entities, contexts = (config.unit_ids, config.style_ids) if axis == 'unit' \
        else (config.style_ids, config.unit_ids)
    lags = np.zeros((len(entities), len(entities), len(contexts)), dtype=np.int64)
    for edge in config.edges_on(axis):
        lags[entities.index(edge.src), entities.index(edge.dst), contexts.index(edge.context)] = edge.lag
    return InfluenceTensor(axis=axis, sources=tuple(entities), targets=tuple(entities),
                           contexts=tuple(contexts), lags=lags)


def generate(config: SynthConfig) -> Tuple[TrajectorySet, InfluenceTensor]:
    """Seeded synthetic trajectory set and the influence tensor that was planted in it."""
    values = rescale(simulate(config))
    split = Split.from_sizes(config.length, config.validation, config.test) if config.test else None
    ts = TrajectorySet(styles=tuple(config.style_ids), units=tuple(config.unit_ids), values=values, split=split)
    _log.info(f'Generated {config.styles} x {config.units} trajectories of length {config.length} with '
              f'{len(config.planted_edges)} planted edges (seed {config.seed}).')
    return ts, ground_truth(config)
