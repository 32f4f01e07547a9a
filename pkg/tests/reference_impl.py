"""Naive per-point reference implementation used as an independent oracle.

Everything here is written as a direct per-point rule interpretation with
explicit loops and summations: O(T * N) zone lookups and O(L) distance sums,
no vectorization, no shared code with the production path. Rules covered:

- zone priority anomaly > post-buffer > pre-buffer > outside, with buffers
  truncated at series boundaries and neighbouring anomalies, and pre-buffers
  starting after the previous anomaly's nominal post-buffer end;
- pre-buffer credit only when the upcoming anomaly has a true detection at
  the same threshold, otherwise those points are plain false positives;
- full-weight TP inside anomalies, linearly fading TP (complement FP) in
  buffers, full-weight FP outside;
- FN weights anchored at the anomaly onset with buffer length r = number of
  true-detected points (r = 0 when only buffer zones are hit), full weight
  for a completely missed anomaly, and plain counting when e = d = 0.
"""

from __future__ import annotations


def find_runs(labels):
    """Maximal runs of 1s as 1-based inclusive (start, end) pairs."""
    runs = []
    start = None
    for idx, value in enumerate(labels, start=1):
        if value and start is None:
            start = idx
        elif not value and start is not None:
            runs.append((start, idx - 1))
            start = None
    if start is not None:
        runs.append((start, len(labels)))
    return runs


def zone_of(t, anomalies, e, d, length):
    """Zone tag and owning anomaly for one time point."""
    for k, (i, n) in enumerate(anomalies):
        if i <= t <= n:
            return "anomaly", k
    for k, (i, n) in enumerate(anomalies):
        hi = min(n + d, length)
        if k + 1 < len(anomalies):
            hi = min(hi, anomalies[k + 1][0] - 1)
        if n + 1 <= t <= hi:
            return "post", k
    for k, (i, n) in enumerate(anomalies):
        lo = max(i - e, 1)
        if k > 0:
            lo = max(lo, anomalies[k - 1][1] + d + 1)
        if lo <= t <= i - 1:
            return "pre", k
    return "outside", -1


def categorize_points(pred, anomalies, e, d):
    """Category name and owner per point ("none" where not predicted)."""
    length = len(pred)
    detected = {
        k: [t for t in range(i, n + 1) if pred[t - 1]] for k, (i, n) in enumerate(anomalies)
    }
    cats = []
    for t in range(1, length + 1):
        if not pred[t - 1]:
            cats.append(("none", -1))
            continue
        zone, k = zone_of(t, anomalies, e, d, length)
        if zone == "anomaly":
            cats.append(("true_detection", k))
        elif zone == "post":
            cats.append(("post_buffer", k))
        elif zone == "pre" and detected[k]:
            cats.append(("pre_buffer", k))
        else:
            cats.append(("outside", -1))
    return cats


def evaluate(scores, labels, e, d, theta):
    """Categories, weights, and weighted precision/recall at one threshold."""
    length = len(labels)
    anomalies = find_runs(labels)
    pred = [s >= theta for s in scores]
    cats = categorize_points(pred, anomalies, e, d)

    w_tp = [0.0] * length
    w_fp = [0.0] * length
    w_fn = [0.0] * length

    for t in range(1, length + 1):
        cat, k = cats[t - 1]
        if cat == "true_detection":
            w_tp[t - 1] = 1.0
        elif cat == "outside":
            w_fp[t - 1] = 1.0
        elif cat == "post_buffer":
            i, n = anomalies[k]
            num = sum(abs(t - y) for y in range(i, n + 1))
            den = sum(abs((n + d) - y) for y in range(i, n + 1))
            w_tp[t - 1] = 1.0 - num / den
            w_fp[t - 1] = 1.0 - w_tp[t - 1]
        elif cat == "pre_buffer":
            i, n = anomalies[k]
            num = sum(abs(y - t) for y in range(i, n + 1))
            den = sum(abs((i - e) - y) for y in range(i, n + 1))
            w_tp[t - 1] = 1.0 - num / den
            w_fp[t - 1] = 1.0 - w_tp[t - 1]

    for k, (i, n) in enumerate(anomalies):
        detected = [t for t in range(i, n + 1) if pred[t - 1]]
        undetected = [t for t in range(i, n + 1) if not pred[t - 1]]
        if not undetected:
            continue
        zone_hit = any(
            pred[t - 1] and zone_of(t, anomalies, e, d, length) in (("pre", k), ("post", k))
            for t in range(1, length + 1)
        )
        if (e == 0 and d == 0) or (not detected and not zone_hit):
            for t in undetected:
                w_fn[t - 1] = 1.0
            continue
        r = len(detected)
        den = sum(abs(n - y) for y in range(i, n + 1))
        for t in undetected:
            if t <= i + r:
                w_fn[t - 1] = 1.0
            else:
                num = sum(abs(t - y) for y in range(i, i + r + 1))
                w_fn[t - 1] = 1.0 - num / den

    tp = sum(w_tp)
    fp = sum(w_fp)
    fn = sum(w_fn)
    precision = 1.0 if tp + fp == 0 else tp / (tp + fp)
    recall = 0.0 if tp + fn == 0 else tp / (tp + fn)
    return cats, w_tp, w_fp, w_fn, precision, recall
