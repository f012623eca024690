import numpy as np
import pytest

from trendsetter.core.metrics import mae
from trendsetter.core.models import InfluenceEdge, InfluenceTensor
from trendsetter.exceptions import DataError
from trendsetter.forecast import (CoherentForecaster, ForecastConfig, TrainingDivergedError,
                                  UntrainedForecasterError, forecast_coherent, train_coherent)
from trendsetter.forecast.baselines import forecast_ar
from trendsetter.forecast.coherent import NetworkParams, coherence_gap, coherent_loss, influencer_inputs
from trendsetter.synth import generate
from tests.helpers import layered_forecast, layered_influence


def empty_tensor(ts):
    return InfluenceTensor.empty('unit', ts.units, ts.units, ts.styles)


def numeric_gradient(loss, params: NetworkParams, eps=1e-6) -> NetworkParams:
    grads = NetworkParams(**{name: np.zeros_like(a) for name, a in params.arrays().items()})
    for name, array in params.arrays().items():
        target = getattr(grads, name)
        for index in np.ndindex(array.shape):
            saved = array[index]
            array[index] = saved + eps
            upper = loss(params)
            array[index] = saved - eps
            lower = loss(params)
            array[index] = saved
            target[index] = (upper - lower) / (2 * eps)
    return grads


class TestCoherentLoss:
    @pytest.mark.parametrize('seed', range(20))
    def test_gradient_matches_finite_differences(self, seed):
        rng = np.random.default_rng(seed)
        rows, batch, width, hidden = 3, 5, 4, 3
        params = NetworkParams(w1=rng.normal(size=(rows, width, hidden)), b1=rng.normal(size=(rows, hidden)),
                               w2=rng.normal(size=(rows, hidden)), b2=rng.normal(size=rows))
        x, y = rng.normal(size=(rows, batch, width)), rng.normal(size=(rows, batch))
        mu, sd = rng.normal(size=rows), rng.uniform(0.5, 2.0, size=rows)

        def loss(p):
            return coherent_loss(p, x, y, mu, sd, 0.7, 1e-3)[0]

        _, analytic, _ = coherent_loss(params, x, y, mu, sd, 0.7, 1e-3)
        numeric = numeric_gradient(loss, params)
        for name in NetworkParams.NAMES:
            np.testing.assert_allclose(getattr(analytic, name), getattr(numeric, name), rtol=1e-5, atol=1e-7,
                                       err_msg=f'gradient of {name}')

    def test_gap_vanishes_when_means_agree(self):
        predicted = np.array([[1.0, 2.0], [3.0, 4.0]])
        truth = np.array([[3.0, 4.0], [1.0, 2.0]])
        np.testing.assert_array_equal(coherence_gap(predicted, truth), [0.0, 0.0])


class TestInfluencerInputs:
    def test_unit_axis(self, small_set):
        edge = InfluenceEdge(src='U0', dst='U2', context='S1', lag=2, p_value=0.01, delta_mse=0.1)
        tensor = InfluenceTensor.from_edges('unit', small_set.units, small_set.units, small_set.styles, [edge])
        inputs = influencer_inputs(small_set, tensor)
        assert inputs[5] == [(3, 2)], 'row of (S1, U2) reads (S1, U0) at lag 2'
        assert sum(len(spec) for spec in inputs) == 1

    def test_style_axis(self, small_set):
        edge = InfluenceEdge(src='S0', dst='S1', context='U1', lag=3, p_value=0.01, delta_mse=0.1)
        tensor = InfluenceTensor.from_edges('style', small_set.styles, small_set.styles, small_set.units, [edge])
        assert influencer_inputs(small_set, tensor)[4] == [(1, 3)]

    def test_unknown_trajectory(self, small_set):
        edge = InfluenceEdge(src='U0', dst='U9', context='S0', lag=1, p_value=0.01, delta_mse=0.1)
        tensor = InfluenceTensor.from_edges('unit', ['U0', 'U9'], ['U0', 'U9'], ['S0'], [edge])
        with pytest.raises(DataError):
            influencer_inputs(small_set, tensor)


class TestTrainCoherent:
    def test_loss_decreases(self, small_set, quick):
        config = quick.copy(update={'coherence': 0.0, 'zero_output_init': True, 'batch_size': None, 'l2': 0.0,
                                    'max_epochs': 10, 'patience': 50})
        bank = train_coherent(small_set, empty_tensor(small_set), config)
        history = np.array(bank.loss_history['S0'])
        assert len(history) == 10
        assert np.all(np.diff(history) < 0), f'training loss went up: {history}'

    def test_networks_are_independent_without_coherence(self, small_set, quick, rng):
        config = quick.copy(update={'coherence': 0.0})
        first = train_coherent(small_set, empty_tensor(small_set), config)
        values = small_set.values.copy()
        values[:, 1:] = 0.5 + 0.05 * rng.normal(size=values[:, 1:].shape)
        second = train_coherent(small_set.with_values(values, small_set.split), empty_tensor(small_set), config)
        for name in NetworkParams.NAMES:
            np.testing.assert_array_equal(getattr(first.params, name)[0], getattr(second.params, name)[0],
                                          err_msg=f'{name} of the untouched network changed')

    def test_test_region_is_ignored(self, small_set, quick, rng):
        first = train_coherent(small_set, empty_tensor(small_set), quick)
        values = small_set.values.copy()
        values[:, :, small_set.split.val_end:] = rng.random(values[:, :, small_set.split.val_end:].shape)
        second = train_coherent(small_set.with_values(values, small_set.split), empty_tensor(small_set), quick)
        for name in NetworkParams.NAMES:
            np.testing.assert_array_equal(getattr(first.params, name), getattr(second.params, name))

    def test_deterministic(self, small_set, quick):
        first = forecast_coherent(train_coherent(small_set, empty_tensor(small_set), quick), small_set, 5)
        second = forecast_coherent(train_coherent(small_set, empty_tensor(small_set), quick, jobs=2), small_set, 5)
        for key in first:
            np.testing.assert_array_equal(first[key], second[key])

    def test_needs_split(self, make_set, quick, rng):
        ts = make_set(rng.random((1, 2, 60)))
        with pytest.raises(DataError):
            train_coherent(ts, empty_tensor(ts), quick)

    def test_divergence(self, small_set, quick):
        config = quick.copy(update={'lr': 1e300, 'max_epochs': 5})
        with pytest.raises(TrainingDivergedError):
            train_coherent(small_set, empty_tensor(small_set), config)


class TestForecastCoherent:
    def test_first_step_uses_observed_history(self, small_set, quick):
        edge = InfluenceEdge(src='U0', dst='U1', context='S0', lag=1, p_value=0.01, delta_mse=0.1)
        tensor = InfluenceTensor.from_edges('unit', small_set.units, small_set.units, small_set.styles, [edge])
        bank = train_coherent(small_set, tensor, quick)
        forecasts = forecast_coherent(bank, small_set, 1)
        flat = small_set.values.reshape(6, -1)
        expected = bank.predict(flat, np.array([small_set.split.val_end]))[:, 0]
        assert [forecasts[key][0] for key in bank.keys] == pytest.approx(list(expected), abs=0)

    def test_forecast_shape(self, small_set, quick):
        forecasts = forecast_coherent(train_coherent(small_set, empty_tensor(small_set), quick), small_set, 7)
        assert list(forecasts) == list(small_set.keys())
        assert all(len(v) == 7 and np.all(np.isfinite(v)) for v in forecasts.values())

    def test_untrained(self, small_set):
        bank = CoherentForecaster(styles=small_set.styles, units=small_set.units, axis='unit',
                                  inputs=[[] for _ in range(6)], d=2, hidden=4, coherence=1.0,
                                  mu=np.zeros(6), sd=np.ones(6))
        with pytest.raises(UntrainedForecasterError):
            forecast_coherent(bank, small_set, 3)

    def test_lagged_influencer_beats_autoregression(self, make_set):
        rng = np.random.default_rng(2024)
        length, val_end = 150, 140
        leader = np.full(length, 0.5)
        for t in range(1, length):
            leader[t] = 0.5 + 0.97 * (leader[t - 1] - 0.5) + 0.03 * rng.normal()
        # The leader steps by at least 0.3 two steps before the test region; the follower only shows it inside.
        level = 0.2 if leader[val_end - 3] > 0.5 else 0.8
        leader[val_end - 2:] = level + 0.005 * rng.normal(size=length - val_end + 2)
        follower = np.full(length, 0.5)
        follower[3:] = 0.5 + 0.9 * (leader[:-3] - 0.5) + 0.01 * rng.normal(size=length - 3)
        ts = make_set(np.stack([leader, follower])[None], validation=4, test=10)
        edge = InfluenceEdge(src='U0', dst='U1', context='S0', lag=3, p_value=0.01, delta_mse=0.1)
        tensor = InfluenceTensor.from_edges('unit', ts.units, ts.units, ts.styles, [edge])
        config = ForecastConfig(order=1, hidden=8, max_epochs=500, patience=50, seed=0)
        influenced = forecast_coherent(train_coherent(ts, tensor, config), ts, 10)[('S0', 'U1')]
        own_lags = forecast_ar(ts.trajectory('S0', 'U1'), 1, 10)
        truth = ts.series('S0', 'U1')[val_end:]
        assert mae(influenced, truth) < mae(own_lags, truth), \
            f'influenced forecast {mae(influenced, truth):.4f} vs autoregression {mae(own_lags, truth):.4f}'


def validation_error(seed: int, influenced: bool) -> float:
    config = layered_influence(seed)
    ts, truth = generate(config)
    tensor = truth if influenced else empty_tensor(ts)
    return float(train_coherent(ts, tensor, layered_forecast(seed)).validation_mae.mean())


class TestInfluencerInputsHelp:
    def test_validation_error_drops(self):
        with_inputs = sum(validation_error(seed, True) for seed in range(3))
        without = sum(validation_error(seed, False) for seed in range(3))
        assert with_inputs < without, f'validation MAE {with_inputs:.5f} with influencers vs {without:.5f} without'


@pytest.mark.slow
class TestInfluencerInputsHelpMonteCarlo:
    def test_validation_error_drops_in_most_seeds(self):
        better = sum(validation_error(seed, True) <= validation_error(seed, False) for seed in range(100))
        assert better >= 80, f'influencer inputs helped in {better} of 100 seeds'
