"""Core series types, anomaly/prediction event extraction, and threshold grids.

Time indices are 1-based and inclusive everywhere they are user-visible
(``Interval(2, 3)`` covers the second and third points of the series).
Internally, arrays are plain 0-based NumPy vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Union

import numpy as np

__all__ = [
    "ScoreSeries",
    "LabelSeries",
    "Interval",
    "EventSet",
    "as_scores",
    "as_labels",
    "extract_events",
    "threshold_scores",
    "threshold_grid",
]

ArrayLike = Union[np.ndarray, Iterable[float]]


@dataclass(frozen=True)
class ScoreSeries:
    """Continuous anomaly scores, one finite value per time point (length >= 1)."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError(f"scores must be one-dimensional, got shape {values.shape}")
        if values.size < 1:
            raise ValueError("scores must contain at least one value")
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise ValueError(f"scores must be finite; found {values[bad]!r} at position {bad + 1}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class LabelSeries:
    """Binary ground-truth labels (0 = normal, 1 = anomalous), one per time point."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 1:
            raise ValueError(f"labels must be one-dimensional, got shape {values.shape}")
        if values.size < 1:
            raise ValueError("labels must contain at least one value")
        as_int = values.astype(np.int8, copy=True) if values.dtype != np.int8 else values.copy()
        if values.dtype.kind == "f" and not np.array_equal(values, as_int):
            raise ValueError("labels must be 0 or 1")
        if not np.all((as_int == 0) | (as_int == 1)):
            bad = int(np.flatnonzero((as_int != 0) & (as_int != 1))[0])
            raise ValueError(f"labels must be 0 or 1; found {values[bad]!r} at position {bad + 1}")
        as_int.flags.writeable = False
        object.__setattr__(self, "values", as_int)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True, order=True)
class Interval:
    """Closed time interval [start, end], 1-based inclusive."""

    start: int
    end: int

    def __post_init__(self):
        if not (1 <= self.start <= self.end):
            raise ValueError(f"invalid interval ({self.start}, {self.end}); need 1 <= start <= end")

    @property
    def length(self) -> int:
        return self.end - self.start + 1


@dataclass(frozen=True)
class EventSet:
    """Maximal runs of positive points, as sorted, disjoint, non-adjacent intervals."""

    events: tuple[Interval, ...]
    kind: Literal["anomaly", "prediction"] = "anomaly"

    def __post_init__(self):
        events = tuple(self.events)
        for prev, cur in zip(events, events[1:]):
            if cur.start <= prev.end + 1:
                raise ValueError(
                    f"events must be sorted and non-adjacent; "
                    f"({prev.start}, {prev.end}) and ({cur.start}, {cur.end}) conflict"
                )
        object.__setattr__(self, "events", events)

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def to_mask(self, length: int) -> np.ndarray:
        """Expand back to a boolean vector of the given length."""
        if self.events and self.events[-1].end > length:
            raise ValueError(f"events extend to {self.events[-1].end}, beyond length {length}")
        mask = np.zeros(length, dtype=bool)
        for ev in self.events:
            mask[ev.start - 1 : ev.end] = True
        return mask


def as_scores(scores: Union[ScoreSeries, ArrayLike]) -> ScoreSeries:
    """Coerce an array-like into a validated ScoreSeries."""
    return scores if isinstance(scores, ScoreSeries) else ScoreSeries(np.asarray(scores))


def as_labels(labels: Union[LabelSeries, ArrayLike]) -> LabelSeries:
    """Coerce an array-like into a validated LabelSeries."""
    return labels if isinstance(labels, LabelSeries) else LabelSeries(np.asarray(labels))


def extract_events(
    labels: Union[LabelSeries, ArrayLike],
    kind: Literal["anomaly", "prediction"] = "anomaly",
) -> EventSet:
    """Extract maximal runs of 1s from a binary series as sorted intervals.

    Parameters
    ----------
    labels : LabelSeries or array-like
        Binary series.
    kind : str
        Tag recorded on the returned EventSet ("anomaly" or "prediction").

    Returns
    -------
    EventSet
        One Interval per maximal run, in increasing time order; empty if the
        series contains no 1s.
    """
    values = as_labels(labels).values
    padded = np.concatenate(([0], values, [0]))
    edges = np.flatnonzero(np.diff(padded))
    starts = edges[0::2] + 1  # 1-based
    ends = edges[1::2]
    return EventSet(tuple(Interval(int(s), int(e)) for s, e in zip(starts, ends)), kind=kind)


def threshold_scores(scores: Union[ScoreSeries, ArrayLike], theta: float) -> LabelSeries:
    """Binarize scores: a point is predicted anomalous iff its score is >= theta."""
    values = as_scores(scores).values
    return LabelSeries((values >= theta).astype(np.int8))


def threshold_grid(
    scores: Union[ScoreSeries, ArrayLike],
    policy: Literal["exhaustive", "quantile"] = "exhaustive",
    n: int | None = None,
) -> np.ndarray:
    """Build the ordered threshold grid used to trace precision-recall curves.

    The grid is strictly decreasing and always brackets the score range: the
    first entry is a sentinel just above the maximum score (no point predicted)
    and the last entry is the minimum score (every point predicted).

    Parameters
    ----------
    scores : ScoreSeries or array-like
        Score series to derive thresholds from.
    policy : str
        "exhaustive" uses every distinct score value. "quantile" downsamples
        to ``n`` evenly spaced quantiles of the score distribution, which is
        useful for very long series.
    n : int, optional
        Number of quantiles for the "quantile" policy (>= 2).

    Returns
    -------
    numpy.ndarray
        Strictly decreasing thresholds, sentinel first.
    """
    values = as_scores(scores).values
    if policy == "exhaustive":
        levels = np.unique(values)
    elif policy == "quantile":
        if n is None or n < 2:
            raise ValueError("quantile grid requires n >= 2")
        qs = np.quantile(values, np.linspace(0.0, 1.0, n))
        levels = np.unique(qs)
    else:
        raise ValueError(f"unknown grid policy {policy!r}")
    sentinel = np.nextafter(levels[-1], np.inf)
    return np.concatenate(([sentinel], levels[::-1]))
