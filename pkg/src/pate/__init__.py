"""Proximity-aware evaluation of time-series anomaly detectors.

The headline metric (PATE) scores continuous anomaly scores against
interval ground truth by building buffer zones around each anomaly event,
weighting every detection by its temporal proximity, and averaging the
weighted AUC-PR over a grid of buffer sizes. PATE-F1 is the buffer-averaged
weighted F1 for binary predictions. The package also ships the usual
comparison baselines (point-adjusted F1/AUC-ROC, standard F1, AUC-ROC,
AUC-PR), a synthetic scenario harness, and a batch CLI.
"""

from .baselines import (
    ConfusionCounts,
    auc_pr,
    auc_roc,
    pa_auc_roc,
    pa_f1,
    point_adjust,
    standard_prf,
)
from .metrics import MetricReport, PRCurve, PRPoint, pate, pate_f1, pr_curve, weighted_pr
from .scenarios import length_study, random_scores, scenario
from .series import (
    EventSet,
    Interval,
    LabelSeries,
    ScoreSeries,
    extract_events,
    threshold_grid,
    threshold_scores,
)
from .zones import BufferConfig, WeightField, ZoneMap, assign_weights, build_zones, categorize

from .version import __version__

__all__ = [
    "ScoreSeries",
    "LabelSeries",
    "Interval",
    "EventSet",
    "extract_events",
    "threshold_scores",
    "threshold_grid",
    "BufferConfig",
    "ZoneMap",
    "WeightField",
    "build_zones",
    "categorize",
    "assign_weights",
    "weighted_pr",
    "pr_curve",
    "pate",
    "pate_f1",
    "MetricReport",
    "PRCurve",
    "PRPoint",
    "ConfusionCounts",
    "point_adjust",
    "standard_prf",
    "pa_f1",
    "pa_auc_roc",
    "auc_roc",
    "auc_pr",
    "scenario",
    "random_scores",
    "length_study",
    "__version__",
]
