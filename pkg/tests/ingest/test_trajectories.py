import numpy as np
import pytest

from trendsetter.core.models import EventLog, Split, Trajectory
from trendsetter.exceptions import DataError
from trendsetter.ingest import (UnknownUnitError, apply_split, build_trajectories, deseasonalize, deseasonalize_set,
                                global_trend)


def events(rows):
    units, t, attrs = zip(*rows)
    return EventLog(units=list(units), t=list(t), attrs=[list(a) for a in attrs])


class TestBuildTrajectories:
    def test_bucket_mean(self, identity_styles):
        log = events([('a', 0, (0.2, 0.8)), ('a', 0, (0.6, 0.4))])
        ts = build_trajectories(log, identity_styles)
        assert ts.series('S0', 'a')[0] == pytest.approx(0.4), 'popularity is the mean posterior of the bucket'
        assert ts.series('S1', 'a')[0] == pytest.approx(0.6)

    def test_carry_forward(self, identity_styles):
        log = events([('a', 0, (0.3, 0.7)), ('a', 2, (0.9, 0.1))])
        ts = build_trajectories(log, identity_styles)
        assert list(ts.series('S0', 'a')) == pytest.approx([0.3, 0.3, 0.9]), 'empty buckets repeat the last value'

    def test_leading_gap_takes_first_value(self, identity_styles):
        log = events([('a', 0, (0.3, 0.7)), ('b', 2, (0.9, 0.1))])
        ts = build_trajectories(log, identity_styles)
        assert list(ts.series('S0', 'b')) == pytest.approx([0.9, 0.9, 0.9])

    def test_rebased_time(self, identity_styles):
        ts = build_trajectories(events([('a', 5, (0.5, 0.5)), ('a', 7, (0.5, 0.5))]), identity_styles)
        assert ts.t0 == 5 and ts.length == 3

    def test_values_are_probabilities(self, identity_styles, rng):
        rows = [(f'u{rng.integers(3)}', int(rng.integers(10)), tuple(rng.dirichlet([1, 1]))) for _ in range(60)]
        ts = build_trajectories(events(rows), identity_styles)
        assert ts.values.min() >= 0.0 and ts.values.max() <= 1.0
        np.testing.assert_allclose(ts.values.sum(axis=0), 1.0, atol=1e-12)

    def test_permutation_invariance(self, identity_styles, rng):
        rows = [(f'u{rng.integers(4)}', int(rng.integers(12)), tuple(rng.dirichlet([1, 1]))) for _ in range(200)]
        log = events(rows)
        first = build_trajectories(log, identity_styles)
        second = build_trajectories(log.permuted(rng.permutation(len(log))), identity_styles)
        np.testing.assert_allclose(first.values, second.values, rtol=0, atol=1e-15)

    def test_unknown_unit(self, identity_styles):
        with pytest.raises(UnknownUnitError):
            build_trajectories(events([('x', 0, (0.5, 0.5))]), identity_styles, units=['a'])

    def test_unit_without_events(self, identity_styles):
        with pytest.raises(DataError):
            build_trajectories(events([('a', 0, (0.5, 0.5))]), identity_styles, units=['a', 'b'])


class TestDeseasonalize:
    def test_sinusoid_vanishes(self):
        t = np.arange(200)
        traj = Trajectory(style='S0', unit='a', values=0.5 + 0.3 * np.sin(2 * np.pi * t / 52))
        out = deseasonalize(traj, 52)
        assert len(out) == 148
        np.testing.assert_allclose(out.values, 0.0, atol=1e-12)

    def test_constant(self):
        out = deseasonalize(Trajectory(style='S0', unit='a', values=np.full(60, 0.7)), 52)
        np.testing.assert_allclose(out.values, 0.0, atol=1e-15)

    def test_ramp(self):
        out = deseasonalize(Trajectory(style='S0', unit='a', values=0.01 * np.arange(80)), 52)
        np.testing.assert_allclose(out.values, 0.52, atol=1e-12)

    def test_too_short(self):
        with pytest.raises(DataError):
            deseasonalize(Trajectory(style='S0', unit='a', values=np.zeros(52)), 52)

    def test_set_rederives_split(self, make_set, rng):
        ts = make_set(rng.random((1, 2, 150)), validation=4, test=26)
        out = deseasonalize_set(ts, 52)
        assert out.split == Split.from_sizes(98, 4, 26)
        assert out.t0 == 52


class TestGlobalTrend:
    def test_mean_over_units(self, make_set):
        values = np.array([[[0.2, 0.4], [0.4, 0.8]]])
        trend = global_trend(make_set(values), 'S0')
        assert list(trend.values) == pytest.approx([0.3, 0.6])
        assert trend.unit == 'global'

    def test_single_unit(self, make_set):
        values = np.array([[[0.1, 0.5, 0.9]]])
        np.testing.assert_array_equal(global_trend(make_set(values), 'S0').values, values[0, 0])


class TestApplySplit:
    def test_standard(self, make_set):
        ts = apply_split(make_set(np.zeros((1, 1, 120))), 4, 26)
        assert (ts.split.train_end, ts.split.val_end) == (90, 94)
        np.testing.assert_array_equal(ts.values, 0.0)

    def test_too_short(self, make_set):
        with pytest.raises(DataError):
            apply_split(make_set(np.zeros((1, 1, 30))), 4, 26)
