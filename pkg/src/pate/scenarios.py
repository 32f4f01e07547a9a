"""Synthetic evaluation scenarios, seeded random baselines, and weight studies.

The scenario suite places one anomaly event on a fixed 80-point series and a
single binary prediction event per scenario, chosen so that each scenario
isolates one qualitative detection behaviour:

========  ==========  ====================================================
scenario  prediction  behaviour
========  ==========  ====================================================
S1        (21, 30)    early false alarm: close to the anomaly, no overlap
S2        (26, 38)    early detection: covers the onset, starts 5 early
S3        (31, 45)    exact detection
S4        (38, 50)    delayed detection: covers the tail, runs 5 late
S5        (46, 55)    delayed-only detection inside the post-buffer
S6        (28, 48)    full coverage with 3 extra points on each side
S7        (31, 38)    partial detection from the onset (8 of 15 points)
S8        (38, 45)    partial detection of the tail (8 of 15 points)
S9        (31, 42)    high-coverage detection from the onset (12 of 15)
S10       (34, 45)    high-coverage detection of the tail (12 of 15)
========  ==========  ====================================================

The anomaly spans (31, 45) and the suite evaluates buffer sizes up to
e = d = 10. The binary-prediction suite p1..p10 reuses the same geometry
with the scores read as fixed predictions. Exact coordinates are a
documented convention; the expected relations between scenario scores
(encoded in PATE_ORDERINGS / PATE_F1_ORDERINGS) are geometry-robust.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import pate, pate_f1
from .series import Interval, LabelSeries, ScoreSeries
from .zones import BufferConfig

__all__ = [
    "Scenario",
    "scenario",
    "scenario_names",
    "random_scores",
    "length_study",
    "evaluate_suite",
    "check_orderings",
    "SUITE_LENGTH",
    "SUITE_ANOMALY",
    "SUITE_BUFFERS",
    "PATE_ORDERINGS",
    "PATE_F1_ORDERINGS",
]

SUITE_LENGTH = 80
SUITE_ANOMALY = Interval(31, 45)
SUITE_BUFFERS = BufferConfig(e_max=10, d_max=10)

_PREDICTIONS: dict[str, Interval] = {
    "S1": Interval(21, 30),
    "S2": Interval(26, 38),
    "S3": Interval(31, 45),
    "S4": Interval(38, 50),
    "S5": Interval(46, 55),
    "S6": Interval(28, 48),
    "S7": Interval(31, 38),
    "S8": Interval(38, 45),
    "S9": Interval(31, 42),
    "S10": Interval(34, 45),
}

# (higher, lower) pairs that must hold strictly for suite scores
PATE_ORDERINGS: tuple[tuple[str, str], ...] = (
    ("S3", "S9"),
    ("S9", "S10"),
    ("S9", "S7"),
    ("S7", "S8"),
    ("S6", "S8"),
    ("S2", "S4"),
    ("S4", "S5"),
    ("S5", "S1"),
    ("S10", "S8"),
    ("S2", "S1"),
    ("S3", "S1"),
    ("S4", "S1"),
    ("S6", "S1"),
    ("S7", "S1"),
    ("S8", "S1"),
    ("S9", "S1"),
    ("S10", "S1"),
)

PATE_F1_ORDERINGS: tuple[tuple[str, str], ...] = (
    ("p9", "p10"),
    ("p7", "p8"),
    ("p2", "p4"),
    ("p4", "p5"),
    ("p5", "p1"),
)


@dataclass(frozen=True)
class Scenario:
    """One synthetic detection scenario: labels, binary scores, and geometry."""

    name: str
    labels: LabelSeries
    scores: ScoreSeries
    anomaly: Interval
    prediction: Interval
    e_max: int
    d_max: int


def scenario_names() -> tuple[str, ...]:
    """All scenario names: S1..S10 (score suite) and p1..p10 (binary suite)."""
    return tuple(_PREDICTIONS) + tuple(f"p{i}" for i in range(1, 11))


def scenario(name: str) -> Scenario:
    """Return the fixed scenario instance for a name like "S3" or "p3"."""
    key = "S" + name[1:] if name.startswith("p") else name
    if key not in _PREDICTIONS:
        raise ValueError(f"unknown scenario {name!r}; expected one of {scenario_names()}")
    pred = _PREDICTIONS[key]
    labels = np.zeros(SUITE_LENGTH, dtype=np.int8)
    labels[SUITE_ANOMALY.start - 1 : SUITE_ANOMALY.end] = 1
    scores = np.zeros(SUITE_LENGTH, dtype=np.float64)
    scores[pred.start - 1 : pred.end] = 1.0
    return Scenario(
        name=name,
        labels=LabelSeries(labels),
        scores=ScoreSeries(scores),
        anomaly=SUITE_ANOMALY,
        prediction=pred,
        e_max=SUITE_BUFFERS.e_max,
        d_max=SUITE_BUFFERS.d_max,
    )


def random_scores(length: int, seed: int) -> ScoreSeries:
    """Uniform random scores in [0, 1), deterministic for a given 64-bit seed.

    Uses NumPy's default generator (PCG64), so the same seed reproduces the
    same series across runs and platforms.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    return ScoreSeries(np.random.default_rng(seed).random(length))


def length_study(lengths: list[int], d: int) -> dict[int, np.ndarray]:
    """Post-buffer TP-weight profiles for anomalies of different lengths.

    For each anomaly length, returns the weight a detection would earn at
    each offset 1..d past the anomaly end, for a post-buffer of size d.
    Longer anomalies earn less at every offset, and every profile decreases
    strictly with the offset.
    """
    if not lengths:
        raise ValueError("lengths must be non-empty")
    if d < 1:
        raise ValueError("post-buffer size must be >= 1")
    offsets = np.arange(1, d + 1)
    out: dict[int, np.ndarray] = {}
    for L in lengths:
        if L < 1:
            raise ValueError("anomaly lengths must be >= 1")
        half_spread = L * (L - 1) // 2
        # sum of (t - y) over the anomaly at t = n + offset, normalized by
        # the buffer-end spread
        out[L] = 1.0 - (L * offsets + half_spread) / float(L * d + half_spread)
    return out


def evaluate_suite(which: str = "S", perturb: float = 0.0) -> dict[str, float]:
    """Score every scenario of one suite: PATE for "S", PATE-F1 for "p".

    ``perturb`` adds an alternating +/- offset to the computed scores and
    exists only to let the ordering harness demonstrate a failure.
    """
    if which not in ("S", "p"):
        raise ValueError('suite must be "S" or "p"')
    results: dict[str, float] = {}
    for i in range(1, 11):
        name = f"{which}{i}"
        sc = scenario(name)
        cfg = BufferConfig(sc.e_max, sc.d_max)
        if which == "S":
            value = pate(sc.scores, sc.labels, cfg).pate
        else:
            value = pate_f1(sc.scores.values.astype(np.int8), sc.labels, cfg).pate_f1
        if perturb:
            value += perturb if i % 2 == 0 else -perturb
        results[name] = float(value)
    return results


def check_orderings(
    scores: dict[str, float], orderings: tuple[tuple[str, str], ...]
) -> list[tuple[str, str, bool]]:
    """Evaluate every (higher, lower) assertion; True where it holds strictly."""
    return [(hi, lo, scores[hi] > scores[lo]) for hi, lo in orderings]
