from datetime import datetime

import numpy as np
import pytest
import pytz
from pydantic import ValidationError

from trendsetter.core.models import (EventLog, EventRecord, InfluenceEdge, InfluenceTensor, Split, SplitError,
                                     Trajectory, week_index)
from trendsetter.exceptions import DataError


class TestSplit:
    def test_standard_sizes(self):
        split = Split.from_sizes(120, 4, 26)
        assert (split.train_end, split.val_end) == (90, 94)
        assert (split.validation, split.test) == (4, 26)

    def test_shortest_series(self):
        split = Split.from_sizes(31, 4, 26, max_lag=0)
        assert split.train_end == 1, 'a single training bucket is allowed without lags'

    def test_lags_need_training_data(self):
        with pytest.raises(SplitError):
            Split.from_sizes(31, 4, 26, max_lag=8)

    def test_too_short(self):
        with pytest.raises(SplitError):
            Split.from_sizes(30, 4, 26)

    def test_trajectory_regions(self):
        traj = Trajectory(style='S0', unit='U0', values=np.arange(40.0), split=Split.from_sizes(40, 4, 26))
        assert len(traj.train) == 10
        assert list(traj.validation) == [10, 11, 12, 13]
        assert len(traj.history) == 14, 'history ends where the test region starts'
        assert traj.test[0] == 14


class TestWeekIndex:
    def test_same_week(self):
        assert week_index(datetime(2013, 1, 13, 23), datetime(2013, 1, 7)) == 0

    def test_next_week(self):
        assert week_index(datetime(2013, 1, 14), datetime(2013, 1, 7)) == 1

    def test_timezone_shifts_bucket(self):
        stamp = pytz.utc.localize(datetime(2013, 1, 13, 20))
        assert week_index(stamp, datetime(2013, 1, 7), 'UTC') == 0
        assert week_index(stamp, datetime(2013, 1, 7), 'Asia/Tokyo') == 1, 'a Tokyo epoch starts 9 hours earlier'

    def test_before_epoch(self):
        with pytest.raises(DataError):
            week_index(datetime(2012, 12, 31), datetime(2013, 1, 7))


class TestEvents:
    def test_needs_one_time_field(self):
        with pytest.raises(ValidationError):
            EventRecord(unit='a', attrs=[0.5])
        with pytest.raises(ValidationError):
            EventRecord(unit='a', t=1, time=datetime(2013, 1, 7), attrs=[0.5])

    def test_attrs_are_probabilities(self):
        with pytest.raises(ValidationError):
            EventRecord(unit='a', t=0, attrs=[1.5])

    def test_log_from_records(self):
        log = EventLog.from_records([
            EventRecord(unit='a', t=3, attrs=[0.1, 0.9]),
            EventRecord(unit='b', time=datetime(2013, 1, 21), attrs=[0.5, 0.5]),
        ])
        assert len(log) == 2 and log.m == 2
        assert list(log.t) == [3, 2]

    def test_empty_log(self):
        with pytest.raises(DataError):
            EventLog.from_records([])


class TestInfluenceTensor:
    def test_self_influence_rejected(self):
        lags = np.zeros((2, 2, 1), dtype=int)
        lags[0, 0, 0] = 1
        with pytest.raises(DataError):
            InfluenceTensor(axis='unit', sources=('a', 'b'), targets=('a', 'b'), contexts=('S0',), lags=lags)

    def test_edges_round_trip(self):
        edge = InfluenceEdge(src='a', dst='b', context='S0', lag=3, p_value=0.01, delta_mse=0.2)
        tensor = InfluenceTensor.from_edges('unit', ['a', 'b'], ['a', 'b'], ['S0'], [edge])
        assert tensor.lag('a', 'b', 'S0') == 3
        assert tensor.nonzero() == 1
        assert tensor.edges() == [edge]

    def test_weights(self):
        edge = InfluenceEdge(src='a', dst='b', context='S0', lag=3, p_value=0.01, delta_mse=0.2)
        tensor = InfluenceTensor.from_edges('unit', ['a', 'b'], ['a', 'b'], ['S0'], [edge])
        assert tensor.weights('lag')[0, 1, 0] == 3.0
        assert tensor.weights('delta_mse')[0, 1, 0] == pytest.approx(0.2)
        assert tensor.weights('delta_mse')[1, 0, 0] == 0.0, 'absent edges have zero weight'

    def test_edge_outside_axes(self):
        edge = InfluenceEdge(src='a', dst='z', context='S0', lag=1, p_value=0.01, delta_mse=0.0)
        with pytest.raises(DataError):
            InfluenceTensor.from_edges('unit', ['a', 'b'], ['a', 'b'], ['S0'], [edge])

    def test_iter_pairs_skips_self(self):
        tensor = InfluenceTensor.empty('unit', ['a', 'b', 'c'], ['a', 'b', 'c'], ['S0', 'S1'])
        pairs = list(tensor.iter_pairs())
        assert len(pairs) == 12
        assert all(i != j for i, j, _ in pairs)

    def test_lag_above_longest_rejected(self):
        lags = np.zeros((2, 2, 1), dtype=int)
        lags[0, 1, 0] = 9
        with pytest.raises(DataError, match='0..8'):
            InfluenceTensor(axis='unit', sources=('a', 'b'), targets=('a', 'b'), contexts=('S0',), lags=lags)
        lags[0, 1, 0] = 8
        tensor = InfluenceTensor(axis='unit', sources=('a', 'b'), targets=('a', 'b'), contexts=('S0',), lags=lags)
        assert tensor.lag('a', 'b', 'S0') == 8, 'the longest lag itself is allowed'

    def test_edge_lag_bounded(self):
        with pytest.raises(ValidationError):
            InfluenceEdge(src='a', dst='b', context='S0', lag=9, p_value=0.01, delta_mse=0.2)
