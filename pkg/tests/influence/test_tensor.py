import json

import numpy as np
import pytest
from pydantic import ValidationError

from trendsetter.exceptions import DataError
from trendsetter.influence import (InfluenceConfig, build_global_tensor, build_influence_tensor, load_tensor,
                                   save_tensor, unit_to_global)
from trendsetter.synth import PlantedEdge, SynthConfig, generate, score_recovery

STRICT = InfluenceConfig(correction='tensor')


@pytest.fixture(scope='module')
def unit_tensor(planted_data):
    return build_influence_tensor(planted_data[0], 'unit', STRICT)


def lagged_trend_set(make_set, rng, length=200):
    """Two units whose mean is unit U0 delayed by two steps."""
    a = rng.normal(size=length)
    b = rng.normal(size=length)
    b[2:] = 2.0 * a[:-2] - a[2:] + 0.01 * rng.normal(size=length - 2)
    return make_set(np.stack([a, b])[None])


class TestBuildInfluenceTensor:
    def test_planted_edge(self, unit_tensor):
        assert unit_tensor.lag('U0', 'U1', 'S0') == 2, 'the planted driver should be found at its lag'
        assert unit_tensor.nonzero() <= 2, f'{unit_tensor.nonzero()} edges found for one planted'
        assert unit_tensor.lag('U1', 'U0', 'S0') == 0
        assert not unit_tensor.failures

    def test_single_unit(self, make_set, rng):
        tensor = build_influence_tensor(make_set(rng.random((2, 1, 60))), 'unit')
        assert tensor.shape == (1, 1, 2)
        assert tensor.nonzero() == 0

    def test_style_axis_is_swapped_unit_axis(self, planted_data):
        ts = planted_data[0]
        by_style = build_influence_tensor(ts, 'style', STRICT)
        swapped = build_influence_tensor(ts.swapped(), 'unit', STRICT)
        assert by_style.axis == 'style' and by_style.sources == ts.styles and by_style.contexts == ts.units
        np.testing.assert_array_equal(by_style.lags, swapped.lags)
        np.testing.assert_array_equal(by_style.p_values, swapped.p_values)

    def test_test_region_is_ignored(self, planted_data, unit_tensor, rng):
        ts = planted_data[0]
        values = ts.values.copy()
        values[:, :, ts.split.val_end:] = rng.random(values[:, :, ts.split.val_end:].shape)
        changed = build_influence_tensor(ts.with_values(values, ts.split), 'unit', STRICT)
        np.testing.assert_array_equal(changed.lags, unit_tensor.lags)
        np.testing.assert_array_equal(changed.p_values, unit_tensor.p_values)

    def test_parallel_matches_serial(self, planted_data, unit_tensor):
        parallel = build_influence_tensor(planted_data[0], 'unit', STRICT, jobs=3)
        np.testing.assert_array_equal(parallel.lags, unit_tensor.lags)
        np.testing.assert_array_equal(parallel.p_values, unit_tensor.p_values)

    def test_failures_are_recorded(self, make_set, rng):
        tensor = build_influence_tensor(make_set(rng.random((1, 2, 12))), 'unit')
        assert tensor.nonzero() == 0
        assert {(f.src, f.dst) for f in tensor.failures} == {('U0', 'U1'), ('U1', 'U0')}

    def test_unknown_axis(self, make_set, rng):
        with pytest.raises(DataError):
            build_influence_tensor(make_set(rng.random((1, 2, 60))), 'city')


class TestGlobalInfluence:
    def test_lagged_copy_of_trend(self, make_set, rng):
        edges = unit_to_global(lagged_trend_set(make_set, rng), 'S0')
        lags = {edge.src: edge.lag for edge in edges}
        assert lags.get('U0') == 2, f'U0 leads the global trend by two steps, got {lags}'
        assert all(edge.dst == 'global' for edge in edges)

    def test_identical_units(self, make_set, rng):
        series = rng.random(120)
        assert unit_to_global(make_set(np.stack([series, series])[None]), 'S0') == []

    def test_single_unit(self, make_set, rng):
        with pytest.raises(DataError):
            unit_to_global(make_set(rng.random((1, 1, 60))), 'S0')

    def test_global_tensor(self, make_set, rng):
        tensor = build_global_tensor(lagged_trend_set(make_set, rng))
        assert tensor.axis == 'global' and tensor.targets == ('global',)
        assert tensor.lag('U0', 'global', 'S0') == 2

    def test_reserved_unit_name(self, make_set, rng):
        with pytest.raises(DataError):
            build_global_tensor(make_set(rng.random((1, 2, 60)), units=['global', 'U1']))


class TestTensorFiles:
    def test_save_and_load(self, tmp_path, unit_tensor):
        save_tensor(unit_tensor, tmp_path / 'tensor.json')
        loaded = load_tensor(tmp_path / 'tensor.json')
        assert loaded.same_axes(unit_tensor) and loaded.axis == 'unit'
        np.testing.assert_array_equal(loaded.lags, unit_tensor.lags)
        assert loaded.edges() == unit_tensor.edges()

    def test_lag_beyond_longest_rejected_on_load(self, tmp_path, unit_tensor):
        path = tmp_path / 'tensor.json'
        save_tensor(unit_tensor, path)
        document = json.loads(path.read_text())
        assert document['edges'], 'the planted data yields at least one edge'
        document['edges'][0]['lag'] = 12
        path.write_text(json.dumps(document))
        with pytest.raises(ValidationError):
            load_tensor(path)


def one_edge_per_style(seed: int) -> SynthConfig:
    """Twenty units over five styles; in style k unit U(2k) drives U(2k+1) at lag k + 1."""
    edges = [PlantedEdge(src=f'U{2 * k}', dst=f'U{2 * k + 1}', context=f'S{k}', lag=k + 1, coefficient=0.9)
             for k in range(5)]
    return SynthConfig(units=20, styles=5, T=200, noise_std=0.05, seed=seed, planted_edges=edges)


def recovery(seed: int):
    ts, truth = generate(one_edge_per_style(seed))
    return score_recovery(build_influence_tensor(ts, 'unit', STRICT), truth)


class TestRecovery:
    @pytest.mark.parametrize('seed', [0, 1])
    def test_planted_edges_found(self, seed):
        score = recovery(seed)
        assert score.recall == 1.0, f'missed planted edges: {score}'
        assert score.lag_accuracy == 1.0, f'wrong lags: {score}'
        assert score.precision >= 0.85, f'too many spurious edges: {score}'


@pytest.mark.slow
class TestRecoveryMonteCarlo:
    def test_recovery_over_seeds(self):
        scores = [recovery(seed) for seed in range(100)]
        recall = np.mean([s.recall for s in scores])
        lag_accuracy = np.mean([s.lag_accuracy for s in scores])
        precision = np.mean([s.precision for s in scores])
        assert recall >= 0.95, f'mean recall {recall:.3f}'
        assert lag_accuracy >= 0.9, f'mean lag accuracy {lag_accuracy:.3f}'
        assert precision >= 0.85, f'mean precision {precision:.3f}'
