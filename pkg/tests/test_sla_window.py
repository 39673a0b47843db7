"""Percentile windows against the naive sort+index oracle."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csac.env import SlaWindow, naive_percentile
from csac.mathcore import SeededRng


def test_nineteen_samples_q95_picks_the_max():
    w = SlaWindow()
    w.extend(range(1, 20))
    assert w.percentile(95) == 19  # j = floor(95*20/100) = 19


def test_three_samples_q50_is_the_median():
    w = SlaWindow()
    w.extend([3, 1, 2])
    assert w.percentile(50) == 2  # sorted {1,2,3}, j = floor(50*4/100) = 2


def test_single_sample_clamps_for_any_q():
    for q in (1, 37, 95, 99):
        w = SlaWindow()
        w.add(0.7)
        assert w.percentile(q) == 0.7


def test_empty_window_signals_no_samples():
    assert SlaWindow().percentile(95) is None


def test_insertion_order_preserved_by_queries():
    w = SlaWindow()
    w.extend([5.0, 1.0, 3.0])
    w.percentile(50)
    assert w.samples == [5.0, 1.0, 3.0]


def test_matches_oracle_for_all_sizes_and_q():
    rng = SeededRng(2024)
    values = rng.uniform(0.0, 1.0, 200)
    w = SlaWindow()
    for t in range(1, 201):
        w.add(values[t - 1])
        for q in range(1, 100):
            assert w.percentile(q) == naive_percentile(values[:t], q)


def test_streaming_tracker_matches_oracle_as_window_grows():
    rng = SeededRng(7)
    w = SlaWindow(tracked_q=95)
    vals = []
    for x in rng.uniform(0.0, 10.0, 500):
        w.add(float(x))
        vals.append(float(x))
        assert w.percentile() == naive_percentile(vals, 95)


@given(st.lists(st.floats(min_value=0, max_value=1e6, allow_nan=False),
                min_size=1, max_size=60),
       st.integers(min_value=1, max_value=99))
@settings(max_examples=200, deadline=None)
def test_property_tracker_and_sort_agree(values, q):
    w = SlaWindow(tracked_q=q)
    w.extend(values)
    assert w.percentile(q) == naive_percentile(values, q)


def test_percentile_curve_is_non_decreasing():
    rng = SeededRng(11)
    w = SlaWindow()
    w.extend(rng.uniform(0.0, 5.0, 300))
    curve = w.percentile_curve(list(range(5, 100, 5)) + [99])
    assert all(a <= b for a, b in zip(curve, curve[1:]))


def test_reset_clears_samples_and_tracker():
    w = SlaWindow(tracked_q=95)
    w.extend([1.0, 2.0])
    w.reset()
    assert len(w) == 0
    assert w.percentile() is None
