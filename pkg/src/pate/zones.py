"""Buffer zones around anomaly events, point categorization, and proximity weights.

For a buffer pair (e, d), every time point belongs to exactly one zone:
the anomaly interval itself, the post-buffer (n, n+d] of the preceding
anomaly, the pre-buffer [i-e, i) of the following anomaly, or outside.
Zone priority is anomaly > post-buffer > pre-buffer > outside: when a
pre-buffer would reach into the previous anomaly's post-buffer region it
starts at n_prev + d + 1 instead, and buffers are truncated at series
boundaries and at neighbouring anomalies.

Predicted points are then weighted by proximity: full true-positive credit
inside an anomaly, linearly fading credit in the buffers (with the
complement counted as false positive), and full false-positive weight
outside. Undetected anomaly points are weighted as false negatives, with a
penalty anchored at the anomaly onset that softens once part of the event
(or its buffers) has been detected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np

from .series import ArrayLike, EventSet, as_labels

__all__ = [
    "BufferConfig",
    "ZoneMap",
    "CategoryMap",
    "WeightField",
    "PartialMissContext",
    "ZONE_OUTSIDE",
    "ZONE_ANOMALY",
    "ZONE_POST",
    "ZONE_PRE",
    "CAT_NONE",
    "CAT_TRUE_DETECTION",
    "CAT_POST_BUFFER",
    "CAT_PRE_BUFFER",
    "CAT_OUTSIDE",
    "build_zones",
    "categorize",
    "assign_weights",
]

# zone codes (per time point)
ZONE_OUTSIDE = 0
ZONE_ANOMALY = 1
ZONE_POST = 2
ZONE_PRE = 3

# category codes for predicted points (unpredicted points stay CAT_NONE)
CAT_NONE = 0
CAT_TRUE_DETECTION = 1
CAT_POST_BUFFER = 2
CAT_PRE_BUFFER = 3
CAT_OUTSIDE = 4


@dataclass(frozen=True)
class BufferConfig:
    """Pre/post buffer ranges E = {0..e_max} and D = {0..d_max}, in time steps."""

    e_max: int = 100
    d_max: int = 100

    def __post_init__(self):
        if self.e_max < 0 or self.d_max < 0:
            raise ValueError(f"buffer maxima must be >= 0, got ({self.e_max}, {self.d_max})")

    @property
    def n_combos(self) -> int:
        return (self.e_max + 1) * (self.d_max + 1)

    def combos(self) -> Iterator[tuple[int, int]]:
        """All (e, d) pairs, e-major then d-minor."""
        for e in range(self.e_max + 1):
            for d in range(self.d_max + 1):
                yield e, d


@dataclass(frozen=True)
class ZoneMap:
    """Per-point zone tags and owning anomaly index for one (e, d) pair.

    ``zone[t]`` is one of the ZONE_* codes and ``owner[t]`` the 0-based index
    of the anomaly owning the zone (-1 outside). ``pre_start``/``post_end``
    hold the effective (clipped) 1-based buffer boundaries per anomaly; an
    empty buffer has start > end.
    """

    length: int
    e: int
    d: int
    anomalies: EventSet
    zone: np.ndarray
    owner: np.ndarray
    pre_start: np.ndarray
    pre_end: np.ndarray
    post_start: np.ndarray
    post_end: np.ndarray


@dataclass(frozen=True)
class CategoryMap:
    """Per-point prediction categories (CAT_* codes) with owning anomaly index."""

    category: np.ndarray
    owner: np.ndarray
    predicted: np.ndarray
    detected_counts: np.ndarray  # true-detection points per anomaly


@dataclass(frozen=True)
class WeightField:
    """Per-point TP/FP/FN weights in [0, 1] for one (e, d) pair and prediction set."""

    w_tp: np.ndarray
    w_fp: np.ndarray
    w_fn: np.ndarray


@dataclass(frozen=True)
class PartialMissContext:
    """Onset-buffer length r and detected coverage for a partially missed anomaly."""

    r: int
    coverage: float

    @classmethod
    def from_counts(cls, detected: int, length: int) -> "PartialMissContext":
        """Derive r from the detected fraction of an anomaly.

        The onset buffer is floor(coverage * length) steps long, which for an
        exact count of detected points is the count itself. Computing it as
        the integer count avoids float rounding at the floor boundary.
        """
        if not 0 <= detected <= length:
            raise ValueError(f"detected count {detected} outside [0, {length}]")
        return cls(r=detected, coverage=detected / length)


def build_zones(anomalies: EventSet, e: int, d: int, length: int) -> ZoneMap:
    """Tag every time point with its zone for buffer sizes (e, d).

    Buffers are truncated at the series boundaries and at neighbouring
    anomalies; a pre-buffer displaced by the previous anomaly's post-buffer
    starts at n_prev + d + 1.
    """
    if e < 0 or d < 0:
        raise ValueError(f"buffer sizes must be >= 0, got ({e}, {d})")
    if anomalies.events and anomalies.events[-1].end > length:
        raise ValueError(f"anomalies extend beyond series length {length}")

    zone = np.zeros(length, dtype=np.uint8)
    owner = np.full(length, -1, dtype=np.int64)
    n = len(anomalies.events)
    pre_start = np.zeros(n, dtype=np.int64)
    pre_end = np.zeros(n, dtype=np.int64)
    post_start = np.zeros(n, dtype=np.int64)
    post_end = np.zeros(n, dtype=np.int64)

    for k, ev in enumerate(anomalies.events):
        zone[ev.start - 1 : ev.end] = ZONE_ANOMALY
        owner[ev.start - 1 : ev.end] = k

        ps = max(1, ev.start - e)
        if k > 0:
            # the post-buffer of the previous anomaly wins any overlap, so the
            # pre-buffer can start no earlier than one past its nominal end
            ps = max(ps, anomalies.events[k - 1].end + d + 1)
        pe = ev.start - 1
        pre_start[k], pre_end[k] = ps, pe
        if ps <= pe:
            zone[ps - 1 : pe] = ZONE_PRE
            owner[ps - 1 : pe] = k

        qs = ev.end + 1
        qe = min(length, ev.end + d)
        if k + 1 < n:
            qe = min(qe, anomalies.events[k + 1].start - 1)
        post_start[k], post_end[k] = qs, qe
        if qs <= qe:
            zone[qs - 1 : qe] = ZONE_POST
            owner[qs - 1 : qe] = k

    return ZoneMap(
        length=length,
        e=e,
        d=d,
        anomalies=anomalies,
        zone=zone,
        owner=owner,
        pre_start=pre_start,
        pre_end=pre_end,
        post_start=post_start,
        post_end=post_end,
    )


def categorize(predictions: Union[EventSet, ArrayLike], zones: ZoneMap) -> CategoryMap:
    """Assign each predicted point its detection category.

    Predicted points inside an anomaly are true detections; points in the
    post-buffer are delayed detections; points in the pre-buffer count as
    early detections only if the upcoming anomaly is itself at least
    partially true-detected at this threshold, otherwise they are plain
    false alarms (outside). Unpredicted points receive no category.
    """
    if isinstance(predictions, EventSet):
        predicted = predictions.to_mask(zones.length)
    else:
        predicted = as_labels(predictions).values.astype(bool)
        if predicted.size != zones.length:
            raise ValueError(
                f"predictions length {predicted.size} does not match zones length {zones.length}"
            )

    n = len(zones.anomalies.events)
    detected_counts = np.zeros(n, dtype=np.int64)
    for k, ev in enumerate(zones.anomalies.events):
        detected_counts[k] = int(np.count_nonzero(predicted[ev.start - 1 : ev.end]))

    category = np.zeros(zones.length, dtype=np.uint8)
    in_anom = predicted & (zones.zone == ZONE_ANOMALY)
    in_post = predicted & (zones.zone == ZONE_POST)
    in_pre = predicted & (zones.zone == ZONE_PRE)
    category[in_anom] = CAT_TRUE_DETECTION
    category[in_post] = CAT_POST_BUFFER
    category[predicted & (zones.zone == ZONE_OUTSIDE)] = CAT_OUTSIDE
    if np.any(in_pre):
        anomaly_hit = detected_counts > 0
        credited = in_pre & anomaly_hit[zones.owner.clip(min=0)]
        category[credited] = CAT_PRE_BUFFER
        category[in_pre & ~credited] = CAT_OUTSIDE

    owner = np.where(category == CAT_NONE, -1, zones.owner)
    owner[category == CAT_OUTSIDE] = -1
    return CategoryMap(
        category=category,
        owner=owner,
        predicted=predicted,
        detected_counts=detected_counts,
    )


def assign_weights(categories: CategoryMap, anomalies: EventSet, zones: ZoneMap) -> WeightField:
    """Compute per-point TP/FP/FN weights from the categorized points.

    Predicted points: weight 1 as TP inside an anomaly; in a buffer, TP
    credit fades linearly with the summed distance to the whole anomaly
    (normalized by the buffer's maximal spread) and the remainder counts as
    FP; outside, weight 1 as FP. Every predicted point satisfies
    w_tp + w_fp = 1.

    Undetected anomaly points: weight 1 as FN for a fully missed anomaly.
    For a partially detected anomaly, points up to r steps past the onset
    keep full FN weight and later points decay with distance from the onset
    buffer, where r is the number of true-detected points. An anomaly whose
    only hits fall in its buffers is treated the same way with r = 0. With
    e = d = 0 there are no buffer zones and every undetected anomaly point
    keeps full FN weight, so the weighting degenerates to plain point-wise
    counting.
    """
    T = zones.length
    w_tp = np.zeros(T, dtype=np.float64)
    w_fp = np.zeros(T, dtype=np.float64)
    w_fn = np.zeros(T, dtype=np.float64)

    cat = categories.category
    w_tp[cat == CAT_TRUE_DETECTION] = 1.0
    w_fp[cat == CAT_OUTSIDE] = 1.0

    e, d = zones.e, zones.d
    strict_fn = e == 0 and d == 0

    for k, ev in enumerate(anomalies.events):
        i, n_end, L = ev.start, ev.end, ev.length
        # sum over the anomaly of |t - y| is L*t - A past the event and
        # A - L*t before it, with A the sum of anomaly positions
        A = L * (i + n_end) // 2
        half_spread = L * (L - 1) // 2

        post = np.flatnonzero(
            (cat[zones.post_start[k] - 1 : zones.post_end[k]] == CAT_POST_BUFFER)
        )
        if post.size:
            ts = zones.post_start[k] + post
            denom = float(L * d + half_spread)  # sum of (n + d - y)
            tp = 1.0 - (L * ts - A) / denom
            w_tp[ts - 1] = tp
            w_fp[ts - 1] = 1.0 - tp

        pre = np.flatnonzero(
            (cat[zones.pre_start[k] - 1 : zones.pre_end[k]] == CAT_PRE_BUFFER)
        )
        if pre.size:
            ts = zones.pre_start[k] + pre
            denom = float(L * e + half_spread)  # sum of (y - (i - e))
            tp = 1.0 - (A - L * ts) / denom
            w_tp[ts - 1] = tp
            w_fp[ts - 1] = 1.0 - tp

        detected = categories.predicted[i - 1 : n_end]
        n_detected = int(np.count_nonzero(detected))
        if n_detected == L:
            continue
        undetected = np.arange(i, n_end + 1)[~detected]

        buffer_hit = bool(
            np.any(categories.predicted[zones.pre_start[k] - 1 : zones.pre_end[k]])
            or np.any(categories.predicted[zones.post_start[k] - 1 : zones.post_end[k]])
        )
        if (n_detected == 0 and not buffer_hit) or strict_fn:
            w_fn[undetected - 1] = 1.0
            continue

        ctx = PartialMissContext.from_counts(n_detected, L)
        w_fn[undetected - 1] = _onset_anchored_fn(undetected, i, n_end, ctx.r)

    return WeightField(w_tp=w_tp, w_fp=w_fp, w_fn=w_fn)


def _onset_anchored_fn(ts: np.ndarray, i: int, n_end: int, r: int) -> np.ndarray:
    """FN weights for undetected points of a partially missed anomaly (i, n_end)."""
    w = np.ones(ts.size, dtype=np.float64)
    tail = ts > i + r
    if not np.any(tail):
        return w
    L = n_end - i + 1
    denom = L * (L - 1) / 2.0  # sum of (n - y) over the anomaly
    if denom == 0.0:
        raise AssertionError("onset-anchored FN weight requested for a length-1 anomaly")
    # sum over the onset buffer [i, i+r] of (t - y)
    num = (r + 1) * (ts[tail] - i) - r * (r + 1) // 2
    w[tail] = 1.0 - num / denom
    return w
