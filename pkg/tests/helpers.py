from pathlib import Path

import numpy as np

from trendsetter.forecast import ForecastConfig
from trendsetter.synth import PlantedEdge, SynthConfig

CONFIG_DIR = Path(__file__).parents[1] / 'config'
SYNTH_DEMO = CONFIG_DIR / 'synth_demo.yml'
SYNTH_DEMO_PIPELINE = CONFIG_DIR / 'synth_demo_pipeline.yml'


def ar1(rng: np.random.Generator, length: int, phi: float = 0.5, scale: float = 1.0) -> np.ndarray:
    """A stationary AR(1) sample after a short burn-in."""
    noise = rng.normal(0.0, scale, size=length + 50)
    x = np.zeros(length + 50)
    for t in range(1, len(x)):
        x[t] = phi * x[t - 1] + noise[t]
    return x[50:]


def layered_influence(seed: int) -> SynthConfig:
    """Six units over two styles that share a per-style trend.

    Within each style U0, U2 and U4 lead U1, U3 and U5; style S0 leads S1 in every unit. Every planted lag is at
    least six steps, so the last step of a style says nothing about them.
    """
    unit_edges = [PlantedEdge(src=f'U{2 * i}', dst=f'U{2 * i + 1}', context=style, lag=8 - i, coefficient=1.0)
                  for i in range(3) for style in ('S0', 'S1')]
    style_edges = [PlantedEdge(src='S0', dst='S1', context=f'U{u}', lag=7, coefficient=0.9, axis='style')
                   for u in range(6)]
    return SynthConfig(units=6, styles=2, T=200, ar_coefficient=0.0, noise_std=0.05, trend_std=0.012,
                       trend_coefficient=0.95, seed=seed, planted_edges=unit_edges + style_edges)


def layered_forecast(seed: int) -> ForecastConfig:
    """Networks that see one own lag, with the coherence term weighted like the six units of a style."""
    return ForecastConfig(order=1, hidden=16, coherence=6.0, max_epochs=400, patience=40, batch_size=32, seed=seed)
