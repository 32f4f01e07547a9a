"""File ingestion, run configuration, and report serialization.

Series files are CSV: either a two-column file with header ``score,label``
(one row per time step), or a pair of headerless single-column files. Reports
are JSON with a fixed key order so identical runs produce identical bytes;
floats use Python's shortest round-trip representation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO, Union

import numpy as np

from .metrics import MetricReport
from .version import __version__

__all__ = [
    "RunConfig",
    "read_series",
    "read_series_csv",
    "read_series_split",
    "write_series_csv",
    "write_report",
    "report_to_json",
    "read_config_file",
]



@dataclass
class RunConfig:
    """Resolved settings for one evaluation run."""

    e_max: int = 100
    d_max: int = 100
    combos: str = "grid"
    grid_policy: str = "exhaustive"
    grid_n: int | None = None
    metrics: tuple[str, ...] = ("pate",)
    threshold: float | None = None
    seed: int | None = None
    threads: int | None = None
    curves: bool = False

    def __post_init__(self):
        if self.e_max < 0 or self.d_max < 0:
            raise ValueError("e_max and d_max must be >= 0")
        if self.grid_policy == "quantile" and (self.grid_n is None or self.grid_n < 2):
            raise ValueError("quantile grid requires grid_n >= 2")


def _parse_score(text: str, path: str, row: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"{path}: row {row}: score {text!r} is not a number") from None
    if not math.isfinite(value):
        raise ValueError(f"{path}: row {row}: score {text!r} is not finite")
    return value


def _parse_label(text: str, path: str, row: int) -> int:
    if text == "0":
        return 0
    if text == "1":
        return 1
    raise ValueError(f"{path}: row {row}: label {text!r} is not 0 or 1")


def read_series_csv(path: Union[str, Path]) -> tuple[np.ndarray, np.ndarray]:
    """Read a two-column ``score,label`` CSV (UTF-8, LF or CRLF line endings)."""
    path = Path(path)
    scores: list[float] = []
    labels: list[int] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        header = fh.readline().strip().strip("\r")
        if header != "score,label":
            raise ValueError(f"{path}: expected header 'score,label', got {header!r}")
        for row, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ValueError(f"{path}: row {row}: expected two columns, got {len(parts)}")
            scores.append(_parse_score(parts[0], str(path), row))
            labels.append(_parse_label(parts[1], str(path), row))
    if not scores:
        raise ValueError(f"{path}: file contains no data rows")
    return np.asarray(scores, dtype=np.float64), np.asarray(labels, dtype=np.int8)


def _read_column(path: Path, parse) -> list:
    out = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row, line in enumerate(fh, start=1):
            line = line.strip()
            if line:
                out.append(parse(line, str(path), row))
    if not out:
        raise ValueError(f"{path}: file contains no data rows")
    return out


def read_series_split(
    scores_path: Union[str, Path], labels_path: Union[str, Path]
) -> tuple[np.ndarray, np.ndarray]:
    """Read scores and labels from two headerless single-column files."""
    scores = _read_column(Path(scores_path), _parse_score)
    labels = _read_column(Path(labels_path), _parse_label)
    if len(scores) != len(labels):
        raise ValueError(
            f"length mismatch: {scores_path} has {len(scores)} rows "
            f"but {labels_path} has {len(labels)} rows"
        )
    return np.asarray(scores, dtype=np.float64), np.asarray(labels, dtype=np.int8)


def read_series(path_or_pair, fmt: str = "csv2") -> tuple[np.ndarray, np.ndarray]:
    """Read an aligned (scores, labels) pair in the named format.

    ``csv2`` expects one path to a ``score,label`` CSV; ``split`` expects a
    (scores_path, labels_path) pair of single-column files.
    """
    if fmt == "csv2":
        return read_series_csv(path_or_pair)
    if fmt == "split":
        scores_path, labels_path = path_or_pair
        return read_series_split(scores_path, labels_path)
    raise ValueError(f"unknown series format {fmt!r}")


def _fmt_float(value: float) -> str:
    return repr(float(value))


def write_series_csv(path: Union[str, Path], scores: np.ndarray, labels: np.ndarray) -> None:
    """Write an aligned pair as a ``score,label`` CSV with round-trip-safe floats."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.size != labels.size:
        raise ValueError(f"length mismatch: {scores.size} scores vs {labels.size} labels")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("score,label\n")
        for s, y in zip(scores, labels):
            fh.write(f"{_fmt_float(s)},{int(y)}\n")


def _report_payload(report: MetricReport) -> dict:
    combo_key = report.combo_value_kind
    payload: dict = {
        "pate": report.pate,
        "pate_f1": report.pate_f1,
        "baselines": {name: report.baselines[name] for name in sorted(report.baselines)},
        "per_combo": [
            {"e": e, "d": d, combo_key: value} for e, d, value in report.per_combo
        ],
    }
    if report.curves is not None:
        payload["curves"] = [
            {
                "e": curve.e,
                "d": curve.d,
                "auc": curve.auc,
                "points": [
                    {"theta": pt.theta, "precision": pt.precision, "recall": pt.recall}
                    for pt in curve.points
                ],
            }
            for curve in report.curves
        ]
    payload["config"] = report.config
    payload["version"] = __version__
    return payload


def report_to_json(report: MetricReport) -> str:
    """Serialize a report deterministically (fixed key order, shortest floats)."""
    return json.dumps(_report_payload(report), indent=2) + "\n"


def write_report(report: MetricReport, path_or_file: Union[str, Path, TextIO]) -> None:
    """Write the JSON report to a path or open text file."""
    text = report_to_json(report)
    if hasattr(path_or_file, "write"):
        path_or_file.write(text)
    else:
        with open(path_or_file, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def read_config_file(path: Union[str, Path]) -> dict[str, str]:
    """Parse a flat ``key = value`` config file; '#' starts a comment."""
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for row, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}: line {row}: expected 'key = value', got {line!r}")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out
