"""Comparison baselines: standard P/R/F1, point adjustment, and plain AUCs.

All threshold-sweep baselines share the same grid machinery as the weighted
metric, so a report's columns are directly comparable and the buffer-free
degenerate case of the weighted metric matches ``auc_pr`` exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .series import (
    ArrayLike,
    LabelSeries,
    ScoreSeries,
    as_labels,
    as_scores,
    extract_events,
    threshold_grid,
)

__all__ = [
    "ConfusionCounts",
    "point_adjust",
    "standard_prf",
    "pa_f1",
    "auc_pr",
    "auc_roc",
    "pa_auc_roc",
]


@dataclass(frozen=True)
class ConfusionCounts:
    """Point-wise confusion counts; tp + fp + fn + tn is the series length."""

    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @classmethod
    def from_predictions(
        cls,
        predictions: Union[LabelSeries, ArrayLike],
        labels: Union[LabelSeries, ArrayLike],
    ) -> "ConfusionCounts":
        preds = as_labels(predictions).values.astype(bool)
        y = as_labels(labels).values.astype(bool)
        if preds.size != y.size:
            raise ValueError(
                f"predictions length {preds.size} does not match labels length {y.size}"
            )
        return cls(
            tp=int(np.count_nonzero(preds & y)),
            fp=int(np.count_nonzero(preds & ~y)),
            fn=int(np.count_nonzero(~preds & y)),
            tn=int(np.count_nonzero(~preds & ~y)),
        )

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


def point_adjust(
    predictions: Union[LabelSeries, ArrayLike],
    labels: Union[LabelSeries, ArrayLike],
) -> LabelSeries:
    """Mark every anomaly event with at least one predicted point as fully detected.

    Points outside anomaly events are copied unchanged. The transform is
    idempotent and never removes a predicted point.
    """
    preds = as_labels(predictions)
    y = as_labels(labels)
    if len(preds) != len(y):
        raise ValueError(f"predictions length {len(preds)} does not match labels length {len(y)}")
    adjusted = preds.values.copy()
    for ev in extract_events(y).events:
        segment = adjusted[ev.start - 1 : ev.end]
        if segment.any():
            segment[:] = 1
    return LabelSeries(adjusted)


def standard_prf(
    predictions: Union[LabelSeries, ArrayLike],
    labels: Union[LabelSeries, ArrayLike],
) -> tuple[float, float, float]:
    """Point-wise precision, recall, and F1 (each 0 when its denominator is 0)."""
    counts = ConfusionCounts.from_predictions(predictions, labels)
    precision = counts.tp / (counts.tp + counts.fp) if counts.tp + counts.fp else 0.0
    recall = counts.tp / (counts.tp + counts.fn) if counts.tp + counts.fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def pa_f1(
    predictions: Union[LabelSeries, ArrayLike],
    labels: Union[LabelSeries, ArrayLike],
) -> float:
    """F1 after point adjustment."""
    return standard_prf(point_adjust(predictions, labels), labels)[2]


def _sweep_counts(scores: ScoreSeries, labels: LabelSeries, grid: np.ndarray | None):
    """Cumulative point-wise TP/FP counts per grid threshold (sentinel first)."""
    if grid is None:
        grid = threshold_grid(scores)
    U = grid.size - 1
    if U < 1 or grid[-1] > scores.values.min():
        raise ValueError("threshold grid must include a value at or below the minimum score")
    ascending = grid[1:][::-1]
    rho = U - np.searchsorted(ascending, scores.values, side="right") + 1
    y = labels.values.astype(bool)
    tp = np.zeros(U + 1, dtype=np.int64)
    fp = np.zeros(U + 1, dtype=np.int64)
    tp[1:] = np.cumsum(np.bincount(rho[y], minlength=U + 1)[1:])
    fp[1:] = np.cumsum(np.bincount(rho[~y], minlength=U + 1)[1:])
    return tp, fp, rho, grid


def _validated(scores, labels):
    s = as_scores(scores)
    y = as_labels(labels)
    if len(s) != len(y):
        raise ValueError(f"scores length {len(s)} does not match labels length {len(y)}")
    return s, y


def auc_pr(
    scores: Union[ScoreSeries, ArrayLike],
    labels: Union[LabelSeries, ArrayLike],
    grid: np.ndarray | None = None,
) -> float:
    """Point-wise AUC-PR: trapezoid over recall across the threshold grid.

    The empty-prediction sentinel anchors the curve at recall 0 / precision 1.
    Requires at least one positive label.
    """
    s, y = _validated(scores, labels)
    pos = int(np.count_nonzero(y.values))
    if pos == 0:
        raise ValueError("PR curve undefined: labels contain no positive points")
    tp, fp, _, _ = _sweep_counts(s, y, grid)
    with np.errstate(invalid="ignore"):
        precision = tp / (tp + fp)
    precision[0] = 1.0
    recall = tp / pos
    return float(np.sum(np.diff(recall) * (precision[:-1] + precision[1:]) * 0.5))


def auc_roc(
    scores: Union[ScoreSeries, ArrayLike],
    labels: Union[LabelSeries, ArrayLike],
    grid: np.ndarray | None = None,
) -> float:
    """Point-wise AUC-ROC: trapezoid over FPR. Requires both label classes."""
    s, y = _validated(scores, labels)
    pos = int(np.count_nonzero(y.values))
    neg = len(y) - pos
    if pos == 0 or neg == 0:
        raise ValueError("ROC undefined: labels must contain both classes")
    tp, fp, _, _ = _sweep_counts(s, y, grid)
    tpr = tp / pos
    fpr = fp / neg
    return float(np.sum(np.diff(fpr) * (tpr[:-1] + tpr[1:]) * 0.5))


def pa_auc_roc(
    scores: Union[ScoreSeries, ArrayLike],
    labels: Union[LabelSeries, ArrayLike],
    grid: np.ndarray | None = None,
) -> float:
    """AUC-ROC with point adjustment applied at every threshold.

    An anomaly event counts as fully detected from the first threshold at
    which any of its points is predicted; false positives are the predicted
    normal points, which point adjustment never changes.
    """
    s, y = _validated(scores, labels)
    pos = int(np.count_nonzero(y.values))
    neg = len(y) - pos
    if pos == 0 or neg == 0:
        raise ValueError("ROC undefined: labels must contain both classes")
    _, fp, rho, grid_arr = _sweep_counts(s, y, grid)
    U = grid_arr.size - 1
    tp = np.zeros(U + 1, dtype=np.int64)
    for ev in extract_events(y).events:
        first = int(rho[ev.start - 1 : ev.end].min())
        tp[first:] += ev.length
    tpr = tp / pos
    fpr = fp / neg
    return float(np.sum(np.diff(fpr) * (tpr[:-1] + tpr[1:]) * 0.5))
