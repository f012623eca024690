import numpy as np
import pytest
from pydantic import ValidationError

from trendsetter.influence import granger_scan
from trendsetter.synth import PlantedEdge, SynthConfig, generate, ground_truth
from trendsetter.synth.generator import rescale, simulate


class TestGenerate:
    def test_deterministic(self, planted):
        first, truth = generate(planted)
        second, _ = generate(planted)
        np.testing.assert_array_equal(first.values, second.values)
        assert truth.lag('U0', 'U1', 'S0') == 2 and truth.nonzero() == 1

    def test_seed_changes_data(self, planted):
        other = planted.copy(update={'seed': planted.seed + 1})
        assert not np.array_equal(generate(planted)[0].values, generate(other)[0].values)

    def test_range_and_split(self, planted_data):
        ts = planted_data[0]
        assert ts.values.min() == pytest.approx(0.1) and ts.values.max() == pytest.approx(0.9)
        assert (ts.split.train_end, ts.split.val_end, ts.length) == (170, 174, 200)

    def test_no_dynamics_gives_constant_trajectories(self):
        ts, _ = generate(SynthConfig(noise_std=0.0, ar_coefficient=0.0, test=0))
        np.testing.assert_array_equal(ts.values, 0.5)
        assert ts.split is None

    def test_planted_copy_is_affine(self):
        config = SynthConfig(units=2, styles=1, T=60, noise_std=0.0, ar_coefficient=0.0, burn_in=0, test=0,
                             planted_edges=[PlantedEdge(src='U0', dst='U1', context='S0', lag=3, coefficient=0.9)])
        raw = simulate(config)
        np.testing.assert_array_equal(raw[0, 1, 3:], 0.9 * raw[0, 0, :-3])
        ts, _ = generate(config)
        a, b = ts.series('S0', 'U0')[:-3], ts.series('S0', 'U1')[3:]
        design = np.column_stack([np.ones_like(a), a])
        residual = b - design @ np.linalg.lstsq(design, b, rcond=None)[0]
        assert np.abs(residual).max() < 1e-12

    def test_style_axis(self):
        config = SynthConfig(units=2, styles=3, axis='style', seed=1,
                             planted_edges=[PlantedEdge(src='S2', dst='S0', context='U1', lag=1, coefficient=0.8)])
        _, truth = generate(config)
        assert truth.axis == 'style' and truth.sources == ('S0', 'S1', 'S2')
        assert truth.lag('S2', 'S0', 'U1') == 1

    def test_rescaling_keeps_granger_outcome(self, planted):
        raw = simulate(planted)
        scaled = rescale(raw)
        before = granger_scan(raw[0, 1], raw[0, 0])
        after = granger_scan(scaled[0, 1], scaled[0, 0])
        assert before.best_lag == after.best_lag == 2
        np.testing.assert_allclose(before.f_stats, after.f_stats, rtol=1e-6)

    def test_edges_on_both_axes(self):
        unit_edge = PlantedEdge(src='U0', dst='U1', context='S0', lag=2, coefficient=0.9)
        style_edge = PlantedEdge(src='S0', dst='S1', context='U0', lag=3, coefficient=0.8, axis='style')
        config = SynthConfig(units=2, styles=2, ar_coefficient=0.0, burn_in=0, test=0, seed=4,
                             planted_edges=[unit_edge, style_edge])
        plain = simulate(config.copy(update={'planted_edges': []}))
        raw = simulate(config)
        np.testing.assert_allclose(raw[0, 1, 2:] - plain[0, 1, 2:], 0.9 * raw[0, 0, :-2], atol=1e-12)
        np.testing.assert_allclose(raw[1, 0, 3:] - plain[1, 0, 3:], 0.8 * raw[0, 0, :-3], atol=1e-12)
        assert ground_truth(config).nonzero() == 1 and ground_truth(config).lag('U0', 'U1', 'S0') == 2
        style_truth = ground_truth(config, 'style')
        assert style_truth.nonzero() == 1 and style_truth.lag('S0', 'S1', 'U0') == 3

    def test_late_edge(self):
        edge = PlantedEdge(src='U0', dst='U1', context='S0', lag=2, coefficient=0.9, start=50)
        config = SynthConfig(units=2, styles=1, ar_coefficient=0.0, burn_in=20, test=0, planted_edges=[edge])
        difference = simulate(config) - simulate(config.copy(update={'planted_edges': []}))
        assert np.all(difference[0, 1, :50] == 0), 'the edge acts before its start'
        np.testing.assert_allclose(difference[0, 1, 50:], 0.9 * simulate(config)[0, 0, 48:-2], atol=1e-12)

    def test_style_trend_is_shared_by_units(self):
        config = SynthConfig(units=3, styles=2, noise_std=0.0, ar_coefficient=0.0, initial_std=0.0,
                             trend_std=0.1, test=0)
        raw = simulate(config)
        np.testing.assert_array_equal(raw[0, 0], raw[0, 2])
        assert raw[0, 0].std() > 0 and not np.array_equal(raw[0, 0], raw[1, 0])

    def test_zero_coefficient_plants_nothing(self, planted):
        silent = planted.planted_edges[0].copy(update={'coefficient': 0.0})
        np.testing.assert_array_equal(simulate(planted.copy(update={'planted_edges': [silent]})),
                                      simulate(planted.copy(update={'planted_edges': []})))


class TestSynthConfig:
    def test_self_loop(self):
        with pytest.raises(ValidationError):
            PlantedEdge(src='U0', dst='U0', context='S0', lag=1, coefficient=0.5)

    def test_lag_range(self):
        with pytest.raises(ValidationError):
            PlantedEdge(src='U0', dst='U1', context='S0', lag=9, coefficient=0.5)

    def test_unknown_ids(self):
        with pytest.raises(ValidationError):
            SynthConfig(units=2, planted_edges=[PlantedEdge(src='U0', dst='U5', context='S0', lag=1, coefficient=1)])

    def test_seasonal_needs_long_series(self):
        with pytest.raises(ValidationError):
            SynthConfig(T=52, seasonal_amplitude=0.5, test=0)

    def test_too_short_for_split(self):
        with pytest.raises(ValidationError):
            SynthConfig(T=30)

    def test_style_edge_ids(self):
        with pytest.raises(ValidationError):
            SynthConfig(styles=2, planted_edges=[PlantedEdge(src='S0', dst='S4', context='U0', lag=1, coefficient=1,
                                                             axis='style')])

    def test_default_axis_counts_as_given(self):
        with pytest.raises(ValidationError, match='twice'):
            SynthConfig(units=2, styles=2, planted_edges=[
                PlantedEdge(src='U0', dst='U1', context='S0', lag=1, coefficient=0.5),
                PlantedEdge(src='U0', dst='U1', context='S0', lag=2, coefficient=0.5, axis='unit'),
            ])

    def test_start_after_end(self):
        with pytest.raises(ValidationError):
            SynthConfig(T=100, planted_edges=[PlantedEdge(src='U0', dst='U1', context='S0', lag=1, coefficient=1,
                                                          start=100)])


def zero_edge_rejections(lag: int, trials: int) -> int:
    rejected = 0
    for seed in range(trials):
        config = SynthConfig(units=2, styles=1, seed=seed, test=0, planted_edges=[
            PlantedEdge(src='U0', dst='U1', context='S0', lag=lag, coefficient=0.0)])
        ts, _ = generate(config)
        rejected += granger_scan(ts.series('S0', 'U1'), ts.series('S0', 'U0'), lags=[lag]).significant
    return rejected


@pytest.mark.slow
class TestZeroCoefficientMonteCarlo:
    def test_rejections_at_nominal_rate(self):
        rate = zero_edge_rejections(3, 1000) / 1000
        assert 0.03 <= rate <= 0.07, f'rejection rate {rate} for a zero-coefficient edge at alpha 0.05'
