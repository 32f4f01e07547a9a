"""Weighted precision/recall, PR curves, and the PATE / PATE-F1 scores.

PATE evaluates continuous anomaly scores against interval ground truth: for
every buffer pair (e, d) it sweeps a threshold grid, computes proximity-
weighted precision and recall at each threshold, integrates the resulting
PR curve, and averages the areas over all (e_max + 1) * (d_max + 1)
pairs. PATE-F1 is the fixed-threshold variant for binary predictions,
averaging the weighted F1 over the same buffer grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Union

import numpy as np

from . import sweep
from .series import (
    ArrayLike,
    LabelSeries,
    ScoreSeries,
    as_labels,
    as_scores,
    extract_events,
    threshold_grid,
)
from .zones import BufferConfig, WeightField, assign_weights, build_zones, categorize

__all__ = [
    "PRPoint",
    "PRCurve",
    "MetricReport",
    "weighted_pr",
    "pr_curve",
    "pate",
    "pate_f1",
]


@dataclass(frozen=True)
class PRPoint:
    theta: float
    precision: float
    recall: float


@dataclass(frozen=True)
class PRCurve:
    """One weighted PR curve: points ordered by recall (stable in threshold order)."""

    e: int
    d: int
    auc: float
    points: tuple[PRPoint, ...]


@dataclass
class MetricReport:
    """Evaluation results: headline scores, per-combo values, and baselines."""

    pate: float | None = None
    pate_f1: float | None = None
    per_combo: list[tuple[int, int, float]] = field(default_factory=list)
    combo_value_kind: Literal["auc", "f1"] = "auc"
    baselines: dict[str, float] = field(default_factory=dict)
    curves: list[PRCurve] | None = None
    config: dict = field(default_factory=dict)


def weighted_pr(weights: WeightField) -> tuple[float, float]:
    """Weighted precision and recall from per-point TP/FP/FN weights.

    Sums run over all time points in ascending order. An empty prediction
    set (zero TP and FP mass) has precision 1 by the usual PR-curve endpoint
    convention; recall is 0 whenever there is no TP mass.
    """
    tp = float(np.sum(weights.w_tp))
    fp = float(np.sum(weights.w_fp))
    fn = float(np.sum(weights.w_fn))
    precision = 1.0 if tp + fp == 0.0 else tp / (tp + fp)
    recall = 0.0 if tp + fn == 0.0 else tp / (tp + fn)
    return precision, recall


def _resolve_grid(scores: ScoreSeries, grid, grid_policy, grid_n) -> np.ndarray:
    if grid is not None:
        grid = np.asarray(grid, dtype=np.float64)
        if grid.ndim != 1 or grid.size < 1 or np.any(np.diff(grid) >= 0):
            raise ValueError("threshold grid must be one-dimensional and strictly decreasing")
        return grid
    return threshold_grid(scores, policy=grid_policy, n=grid_n)


def _prepare(scores, labels, e_max, d_max, grid, grid_policy, grid_n):
    s = as_scores(scores)
    y = as_labels(labels)
    if len(s) != len(y):
        raise ValueError(f"scores length {len(s)} does not match labels length {len(y)}")
    anomalies = extract_events(y)
    if len(anomalies) == 0:
        raise ValueError("labels contain no anomalous points")
    grid_arr = _resolve_grid(s, grid, grid_policy, grid_n)
    return sweep.prepare(s.values, anomalies, grid_arr, e_max, d_max), grid_arr


def pr_curve(
    scores: Union[ScoreSeries, ArrayLike],
    labels: Union[LabelSeries, ArrayLike],
    e: int,
    d: int,
    grid: np.ndarray | None = None,
    grid_policy: str = "exhaustive",
    grid_n: int | None = None,
) -> PRCurve:
    """Weighted PR curve and its area for a single buffer pair (e, d).

    One point per grid threshold (the leading sentinel gives the empty
    prediction set, i.e. recall 0 / precision 1). The area is the trapezoid
    over recall with points taken in stable recall order.
    """
    prep, grid_arr = _prepare(scores, labels, e, d, grid, grid_policy, grid_n)
    auc = float(sweep.combo_auc_grid(prep, np.array([e]), np.array([d]))[0, 0])
    precision, recall = sweep.combo_pr_points(prep, e, d)
    order = np.argsort(recall, kind="stable")
    points = tuple(
        PRPoint(float(grid_arr[j]), float(precision[j]), float(recall[j])) for j in order
    )
    return PRCurve(e=e, d=d, auc=auc, points=points)


def pate(
    scores: Union[ScoreSeries, ArrayLike],
    labels: Union[LabelSeries, ArrayLike],
    cfg: BufferConfig = BufferConfig(),
    grid: np.ndarray | None = None,
    grid_policy: str = "exhaustive",
    grid_n: int | None = None,
    combos: Literal["grid", "diagonal"] = "grid",
    threads: int = 1,
    curves: bool = False,
) -> MetricReport:
    """Proximity-aware weighted AUC-PR, averaged over buffer-size pairs.

    Parameters
    ----------
    scores, labels : array-like
        Continuous scores and binary ground truth of equal length.
    cfg : BufferConfig
        Buffer ranges E = {0..e_max}, D = {0..d_max}.
    grid : ndarray, optional
        Explicit strictly-decreasing threshold grid; defaults to the policy.
    grid_policy, grid_n :
        Threshold-grid policy when ``grid`` is not given ("exhaustive", or
        "quantile" with ``grid_n`` levels).
    combos : str
        "grid" averages over the full E x D product; "diagonal" only over
        the pairs e = d = 0..min(e_max, d_max).
    threads : int
        Worker threads for the combo sweep. Results are independent of the
        thread count: every combo is computed identically and reduced in
        fixed (e-major, d-minor) order.
    curves : bool
        Attach the full per-combo PR curves to the report (can be large).
    """
    prep, grid_arr = _prepare(scores, labels, cfg.e_max, cfg.d_max, grid, grid_policy, grid_n)

    if combos == "grid":
        e_values = np.arange(cfg.e_max + 1)
        d_values = np.arange(cfg.d_max + 1)
        pairs = [(e, d) for e in e_values for d in d_values]
        aucs = sweep.combo_auc_grid(prep, e_values, d_values, threads=threads)
        flat = aucs.ravel()
    elif combos == "diagonal":
        k = min(cfg.e_max, cfg.d_max)
        pairs = [(j, j) for j in range(k + 1)]
        flat = np.array(
            [sweep.combo_auc_grid(prep, np.array([j]), np.array([j]))[0, 0] for j in range(k + 1)]
        )
    else:
        raise ValueError(f"unknown combo selection {combos!r}")

    report = MetricReport(
        pate=float(np.mean(flat)),
        per_combo=[(int(e), int(d), float(a)) for (e, d), a in zip(pairs, flat)],
        combo_value_kind="auc",
        config={
            "e_max": cfg.e_max,
            "d_max": cfg.d_max,
            "combos": combos,
            "grid_policy": grid_policy if grid is None else "explicit",
            "grid_n": grid_n,
        },
    )
    if curves:
        report.curves = []
        for (e, d), auc in zip(pairs, flat):
            precision, recall = sweep.combo_pr_points(prep, int(e), int(d))
            order = np.argsort(recall, kind="stable")
            points = tuple(
                PRPoint(float(grid_arr[j]), float(precision[j]), float(recall[j]))
                for j in order
            )
            report.curves.append(PRCurve(e=int(e), d=int(d), auc=float(auc), points=points))
    return report


def pate_f1(
    predictions: Union[LabelSeries, ArrayLike],
    labels: Union[LabelSeries, ArrayLike],
    cfg: BufferConfig = BufferConfig(),
    combos: Literal["grid", "diagonal"] = "grid",
) -> MetricReport:
    """Buffer-averaged weighted F1 for binary predictions.

    For each (e, d) pair the weighted precision and recall of the fixed
    prediction set are combined into F1 (defined as 0 when both are 0), and
    the scores are averaged over the buffer grid.
    """
    preds = as_labels(predictions)
    y = as_labels(labels)
    if len(preds) != len(y):
        raise ValueError(f"predictions length {len(preds)} does not match labels length {len(y)}")
    anomalies = extract_events(y)
    if len(anomalies) == 0:
        raise ValueError("labels contain no anomalous points")
    pred_events = extract_events(preds, kind="prediction")

    if combos == "grid":
        pairs = list(BufferConfig(cfg.e_max, cfg.d_max).combos())
    elif combos == "diagonal":
        pairs = [(j, j) for j in range(min(cfg.e_max, cfg.d_max) + 1)]
    else:
        raise ValueError(f"unknown combo selection {combos!r}")

    per_combo: list[tuple[int, int, float]] = []
    for e, d in pairs:
        zones = build_zones(anomalies, e, d, len(y))
        cats = categorize(pred_events, zones)
        weights = assign_weights(cats, anomalies, zones)
        precision, recall = weighted_pr(weights)
        f1 = 0.0 if precision + recall == 0.0 else 2 * precision * recall / (precision + recall)
        per_combo.append((e, d, f1))

    values = np.array([v for _, _, v in per_combo])
    return MetricReport(
        pate_f1=float(np.mean(values)),
        per_combo=per_combo,
        combo_value_kind="f1",
        config={"e_max": cfg.e_max, "d_max": cfg.d_max, "combos": combos},
    )
