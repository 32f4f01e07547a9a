"""Property-based invariants for series handling and the weighting scheme."""

import numpy as np
from hypothesis import given, settings, strategies as st

from pate.metrics import pate
from pate.series import extract_events, threshold_grid, threshold_scores
from pate.zones import BufferConfig, assign_weights, build_zones, categorize

label_lists = st.lists(st.integers(min_value=0, max_value=1), min_size=1, max_size=60)
score_lists = st.lists(
    st.floats(min_value=0.0, max_value=1.0, allow_nan=False, width=64),
    min_size=1,
    max_size=60,
)


@given(label_lists)
@settings(max_examples=100)
def test_event_extraction_round_trips(labels):
    events = extract_events(labels)
    mask = events.to_mask(len(labels))
    assert mask.astype(int).tolist() == labels


@given(label_lists)
@settings(max_examples=100)
def test_events_sorted_disjoint_nonadjacent(labels):
    events = extract_events(labels).events
    for prev, cur in zip(events, events[1:]):
        assert cur.start > prev.end + 1


@given(score_lists, st.floats(min_value=0.0, max_value=1.0), st.floats(min_value=0.0, max_value=1.0))
@settings(max_examples=100)
def test_threshold_nesting(scores, t1, t2):
    lo, hi = min(t1, t2), max(t1, t2)
    at_hi = threshold_scores(scores, hi).values
    at_lo = threshold_scores(scores, lo).values
    assert np.all(at_hi <= at_lo)


@given(score_lists)
@settings(max_examples=100)
def test_grid_strictly_decreasing_and_complete(scores):
    grid = threshold_grid(scores)
    assert np.all(np.diff(grid) < 0)
    assert set(np.unique(scores)) <= set(grid[1:])
    assert grid[0] > max(scores)


@given(
    st.data(),
    st.integers(min_value=0, max_value=6),
    st.integers(min_value=0, max_value=6),
)
@settings(max_examples=150, deadline=None)
def test_weights_bounded_and_complementary(data, e, d):
    T = data.draw(st.integers(min_value=4, max_value=50))
    labels = np.asarray(
        data.draw(st.lists(st.integers(0, 1), min_size=T, max_size=T)), dtype=np.int8
    )
    if not labels.any():
        labels[T // 2] = 1
    preds = np.asarray(
        data.draw(st.lists(st.integers(0, 1), min_size=T, max_size=T)), dtype=np.int8
    )
    zones = build_zones(extract_events(labels), e, d, T)
    cats = categorize(preds, zones)
    w = assign_weights(cats, zones.anomalies, zones)
    for arr in (w.w_tp, w.w_fp, w.w_fn):
        assert np.all(arr >= 0.0) and np.all(arr <= 1.0)
    predicted = cats.predicted
    np.testing.assert_allclose(w.w_tp[predicted] + w.w_fp[predicted], 1.0, atol=1e-12)
    silent = ~predicted & ~labels.astype(bool)
    assert not np.any(w.w_tp[silent]) and not np.any(w.w_fp[silent]) and not np.any(w.w_fn[silent])


@given(st.data())
@settings(max_examples=50, deadline=None)
def test_pate_bounded(data):
    T = data.draw(st.integers(min_value=10, max_value=40))
    labels = np.zeros(T, dtype=np.int8)
    start = data.draw(st.integers(min_value=1, max_value=T - 2))
    end = data.draw(st.integers(min_value=start, max_value=T - 1))
    labels[start : end + 1] = 1
    scores = np.asarray(
        data.draw(
            st.lists(
                st.floats(min_value=0.0, max_value=1.0, allow_nan=False, width=64),
                min_size=T,
                max_size=T,
            )
        )
    )
    report = pate(scores, labels, BufferConfig(3, 3))
    assert 0.0 <= report.pate <= 1.0
    assert all(0.0 <= value <= 1.0 for _, _, value in report.per_combo)
