"""Threshold-sweep engine for weighted PR curves over buffer-size grids.

Evaluating one (e, d) pair naively costs O(T) per threshold, which is far
too slow for exhaustive grids over long series. This module compresses the
sweep: as the threshold drops, the weighted TP and FN sums only change at a
small set of "event" ranks (anomaly-interior points entering, buffer-zone
points entering or being credited, early-detection gates opening). Between
events the recall is constant, so the PR-curve area only accrues at events
and each (e, d) pair costs O(events), independent of the threshold count.

Everything that does not depend on (e, d) — entry ranks, per-threshold
prediction counts, the per-anomaly FN trajectory — is computed once in
:func:`prepare`. Each combo then only rebuilds the buffer-zone credit and
the missed-anomaly grace terms.

The conventions match the direct per-threshold path exactly: precision is
defined as 1 for an empty prediction set, curve points are ordered by
recall (stable in threshold order), and the area is the trapezoid over
recall.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .series import EventSet

__all__ = ["prepare", "combo_auc_grid", "combo_pr_points", "Prepared"]

_NO_RANK = np.iinfo(np.int64).max


@dataclass
class Prepared:
    """Combo-independent state for one (scores, labels, grid) triple."""

    T: int
    U: int
    grid: np.ndarray
    rho: np.ndarray              # entry rank per point, in [1, U]
    cnt_pred: np.ndarray         # (U+1,) predicted-point count per rank
    total_pos: int

    starts: np.ndarray           # per anomaly, 1-based inclusive
    ends: np.ndarray
    lengths: np.ndarray
    j_first: np.ndarray          # rank of first true detection per anomaly

    J: np.ndarray                # (M,) event ranks, J[0] == 0
    cnt_pred_J: np.ndarray       # cnt_pred at event ranks
    cnt_last_J: np.ndarray       # cnt_pred just before the next event
    td_cum_J: np.ndarray         # true-detection TP sum at event ranks
    fn_soft_cum_J: np.ndarray    # FN sum with onset-anchored softening
    fn_strict_cum_J: np.ndarray  # FN sum counting every undetected point as 1
    j_first_Jidx: np.ndarray

    z_pos: np.ndarray            # zone-universe point positions (1-based)
    z_owner: np.ndarray
    z_is_pre: np.ndarray
    z_rho: np.ndarray
    z_fire_Jidx: np.ndarray      # event index where the point's TP credit lands
    z_num: np.ndarray            # distance-sum numerator of the buffer weight
    z_owner_ptr: np.ndarray      # segment starts per anomaly (universe is owner-sorted)


def prepare(scores: np.ndarray, anomalies: EventSet, grid: np.ndarray,
            e_max: int, d_max: int) -> Prepared:
    """Precompute the combo-independent sweep state.

    ``grid`` must be strictly decreasing with a leading sentinel above the
    maximum score. ``e_max``/``d_max`` bound the buffer sizes the prepared
    state will be asked to evaluate.
    """
    T = int(scores.size)
    n_anom = len(anomalies.events)
    if n_anom == 0:
        raise ValueError("labels contain no anomalous points")

    U = grid.size - 1
    if U < 1 or grid[-1] > scores.min():
        raise ValueError("threshold grid must include a value at or below the minimum score")
    ascending = grid[1:][::-1]
    rho = U - np.searchsorted(ascending, scores, side="right") + 1
    cnt_pred = np.zeros(U + 1, dtype=np.int64)
    cnt_pred[1:] = np.cumsum(np.bincount(rho, minlength=U + 1)[1:])

    starts = np.array([ev.start for ev in anomalies.events], dtype=np.int64)
    ends = np.array([ev.end for ev in anomalies.events], dtype=np.int64)
    lengths = ends - starts + 1
    total_pos = int(lengths.sum())

    j_first = np.empty(n_anom, dtype=np.int64)
    delta_ranks: list[np.ndarray] = []
    delta_td: list[np.ndarray] = []
    delta_soft: list[np.ndarray] = []
    delta_strict: list[np.ndarray] = []
    for k in range(n_anom):
        ranks_k = rho[starts[k] - 1 : ends[k]]
        j_first[k] = ranks_k.min()
        br, btd, bsoft, bstrict = _interior_deltas(ranks_k, int(lengths[k]))
        delta_ranks.append(br)
        delta_td.append(btd)
        delta_soft.append(bsoft)
        delta_strict.append(bstrict)

    z_pos, z_owner, z_is_pre, z_num = _zone_universe(starts, ends, lengths, T, e_max, d_max)
    z_rho = rho[z_pos - 1] if z_pos.size else np.empty(0, dtype=np.int64)
    z_fire = np.where(z_is_pre, np.maximum(z_rho, j_first[z_owner]), z_rho) \
        if z_pos.size else np.empty(0, dtype=np.int64)
    z_owner_ptr = np.searchsorted(z_owner, np.arange(n_anom)) \
        if z_pos.size else np.zeros(n_anom, dtype=np.int64)

    all_delta_ranks = np.concatenate(delta_ranks) if delta_ranks else np.empty(0, np.int64)
    J = np.unique(np.concatenate((
        np.array([0], dtype=np.int64),
        all_delta_ranks,
        j_first,
        z_fire,
        z_rho,
    )))
    M = J.size

    cnt_pred_J = cnt_pred[J]
    cnt_last_J = np.empty(M, dtype=np.int64)
    cnt_last_J[:-1] = cnt_pred[J[1:] - 1]
    cnt_last_J[-1] = cnt_pred[U]

    pos_in_J = np.searchsorted(J, all_delta_ranks)
    td_cum_J = np.zeros(M, dtype=np.float64)
    fn_soft_cum_J = np.zeros(M, dtype=np.float64)
    fn_strict_cum_J = np.zeros(M, dtype=np.float64)
    np.add.at(td_cum_J, pos_in_J, np.concatenate(delta_td))
    np.add.at(fn_soft_cum_J, pos_in_J, np.concatenate(delta_soft))
    np.add.at(fn_strict_cum_J, pos_in_J, np.concatenate(delta_strict))
    np.cumsum(td_cum_J, out=td_cum_J)
    np.cumsum(fn_soft_cum_J, out=fn_soft_cum_J)
    np.cumsum(fn_strict_cum_J, out=fn_strict_cum_J)
    fn_soft_cum_J += total_pos
    fn_strict_cum_J += total_pos

    return Prepared(
        T=T,
        U=U,
        grid=grid,
        rho=rho,
        cnt_pred=cnt_pred,
        total_pos=total_pos,
        starts=starts,
        ends=ends,
        lengths=lengths,
        j_first=j_first,
        J=J,
        cnt_pred_J=cnt_pred_J,
        cnt_last_J=cnt_last_J,
        td_cum_J=td_cum_J,
        fn_soft_cum_J=fn_soft_cum_J,
        fn_strict_cum_J=fn_strict_cum_J,
        j_first_Jidx=np.searchsorted(J, j_first),
        z_pos=z_pos,
        z_owner=z_owner,
        z_is_pre=z_is_pre,
        z_rho=z_rho,
        z_fire_Jidx=np.searchsorted(J, z_fire) if z_fire.size else z_fire,
        z_num=z_num,
        z_owner_ptr=z_owner_ptr,
    )


def _interior_deltas(ranks: np.ndarray, L: int):
    """FN/TP deltas at the ranks where points of one anomaly become detected.

    Replays the threshold sweep for a single anomaly, maintaining the
    undetected-point summaries needed for the onset-anchored FN sum in O(1)
    amortized per point: the count below the onset buffer boundary, and the
    count and offset sum beyond it.
    """
    order = np.argsort(ranks, kind="stable")
    sorted_ranks = ranks[order]
    boundaries = np.flatnonzero(np.diff(sorted_ranks)) + 1
    batch_starts = np.concatenate(([0], boundaries))
    batch_ends = np.concatenate((boundaries, [L]))

    detected = np.zeros(L, dtype=bool)
    q2 = L * (L - 1) / 2.0
    m_low = 1
    cnt_high = L - 1
    s_high = L * (L - 1) // 2
    r = 0
    prev_soft = float(L)  # before any detection the anomaly is fully missed

    out_ranks = np.empty(batch_starts.size, dtype=np.int64)
    out_td = np.empty(batch_starts.size, dtype=np.float64)
    out_soft = np.empty(batch_starts.size, dtype=np.float64)
    out_strict = np.empty(batch_starts.size, dtype=np.float64)

    for b, (lo, hi) in enumerate(zip(batch_starts, batch_ends)):
        for p in order[lo:hi]:
            detected[p] = True
            if p <= r:
                m_low -= 1
            else:
                cnt_high -= 1
                s_high -= p
        new_r = r + (hi - lo)
        for q in range(r + 1, min(new_r, L - 1) + 1):
            if not detected[q]:
                m_low += 1
                cnt_high -= 1
                s_high -= q
        r = new_r
        if L == 1:
            soft = float(m_low)
        else:
            soft = m_low + cnt_high * (1.0 + r * (r + 1) / (2.0 * q2)) - (r + 1) * s_high / q2
        out_ranks[b] = sorted_ranks[lo]
        out_td[b] = hi - lo
        out_soft[b] = soft - prev_soft
        out_strict[b] = -(hi - lo)
        prev_soft = soft

    return out_ranks, out_td, out_soft, out_strict


def _zone_universe(starts, ends, lengths, T, e_max, d_max):
    """Widest possible buffer-zone points per anomaly, owner-sorted (pre then post)."""
    pos_parts: list[np.ndarray] = []
    owner_parts: list[np.ndarray] = []
    pre_parts: list[np.ndarray] = []
    num_parts: list[np.ndarray] = []
    n_anom = starts.size
    for k in range(n_anom):
        i, n_end, L = int(starts[k]), int(ends[k]), int(lengths[k])
        a_sum = L * (i + n_end) // 2
        lo = max(1, i - e_max, (int(ends[k - 1]) + 1) if k else 1)
        if lo <= i - 1:
            ts = np.arange(lo, i, dtype=np.int64)
            pos_parts.append(ts)
            owner_parts.append(np.full(ts.size, k, dtype=np.int64))
            pre_parts.append(np.ones(ts.size, dtype=bool))
            num_parts.append(a_sum - L * ts)
        hi = min(T, n_end + d_max, (int(starts[k + 1]) - 1) if k + 1 < n_anom else T)
        if n_end + 1 <= hi:
            ts = np.arange(n_end + 1, hi + 1, dtype=np.int64)
            pos_parts.append(ts)
            owner_parts.append(np.full(ts.size, k, dtype=np.int64))
            pre_parts.append(np.zeros(ts.size, dtype=bool))
            num_parts.append(L * ts - a_sum)
    if not pos_parts:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy(), np.empty(0, dtype=bool), empty.copy()
    return (
        np.concatenate(pos_parts),
        np.concatenate(owner_parts),
        np.concatenate(pre_parts),
        np.concatenate(num_parts),
    )


def combo_auc_grid(prep: Prepared, e_values: np.ndarray, d_values: np.ndarray,
                   threads: int = 1, d_chunk: int | None = None) -> np.ndarray:
    """Weighted AUC-PR for every (e, d) pair; shape (len(e_values), len(d_values)).

    Results are independent of ``threads`` and ``d_chunk``: each (e, d) pair
    is computed by the same sequence of operations and written to its fixed
    slot.
    """
    e_values = np.asarray(e_values, dtype=np.int64)
    d_values = np.asarray(d_values, dtype=np.int64)
    if d_chunk is None:
        # keep per-chunk temporaries around ~2M elements
        d_chunk = max(1, min(d_values.size, int(2_000_000 // max(1, prep.J.size))))
    aucs = np.empty((e_values.size, d_values.size), dtype=np.float64)

    def run_row(ei: int) -> None:
        e = int(e_values[ei])
        for lo in range(0, d_values.size, d_chunk):
            chunk = d_values[lo : lo + d_chunk]
            aucs[ei, lo : lo + chunk.size] = _auc_for_e(prep, e, chunk)

    if threads <= 1 or e_values.size == 1:
        for ei in range(e_values.size):
            run_row(ei)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run_row, range(e_values.size)))
    return aucs


def _effective_buffers(prep: Prepared, e: int, d_values: np.ndarray):
    """Clipped pre-buffer starts and post-buffer ends, shape (n_anom, n_d)."""
    n_anom = prep.starts.size
    prev_end = np.empty(n_anom, dtype=np.int64)
    prev_end[0] = -(10**12)  # first anomaly has nothing before it
    prev_end[1:] = prep.ends[:-1]
    next_start = np.empty(n_anom, dtype=np.int64)
    next_start[:-1] = prep.starts[1:]
    next_start[-1] = prep.T + 1

    ps = np.maximum(prep.starts - e, 1)[:, None]
    ps = np.maximum(ps, prev_end[:, None] + d_values[None, :] + 1)
    pe = np.minimum(prep.ends[:, None] + d_values[None, :], prep.T)
    pe = np.minimum(pe, next_start[:, None] - 1)
    return ps, pe


def _tp_fn_for_e(prep: Prepared, e: int, d_values: np.ndarray):
    """Weighted TP and FN sums at event ranks, shape (len(d_values), M)."""
    M = prep.J.size
    n_d = d_values.size

    tp = np.tile(prep.td_cum_J, (n_d, 1))
    fn = np.tile(prep.fn_soft_cum_J, (n_d, 1))

    if prep.z_pos.size:
        ps, pe = _effective_buffers(prep, e, d_values)

        in_pre = prep.z_pos[None, :] >= ps[prep.z_owner].transpose(1, 0)
        in_post = prep.z_pos[None, :] <= pe[prep.z_owner].transpose(1, 0)
        in_zone = np.where(prep.z_is_pre[None, :], in_pre, in_post)

        L_own = prep.lengths[prep.z_owner]
        q2_own = (prep.lengths * (prep.lengths - 1) // 2)[prep.z_owner]
        denom = np.where(
            prep.z_is_pre[None, :],
            (L_own * e + q2_own)[None, :].astype(np.float64),
            (L_own[None, :] * d_values[:, None] + q2_own[None, :]).astype(np.float64),
        )
        weights = np.where(
            in_zone, 1.0 - prep.z_num[None, :] / np.where(denom > 0, denom, 1.0), 0.0
        )

        flat_idx = (np.arange(n_d)[:, None] * M + prep.z_fire_Jidx[None, :]).ravel()
        zone_tp = np.bincount(flat_idx, weights=weights.ravel(), minlength=n_d * M)
        tp += np.cumsum(zone_tp.reshape(n_d, M), axis=1)

        # grace for anomalies whose only hits are buffer hits: FN drops by 1
        # from the first in-zone hit until the first true detection
        masked_rho = np.where(in_zone, prep.z_rho[None, :], _NO_RANK)
        seg_ends = np.concatenate((prep.z_owner_ptr[1:], [prep.z_pos.size]))
        empty_seg = prep.z_owner_ptr >= seg_ends
        safe_ptr = np.minimum(prep.z_owner_ptr, prep.z_pos.size - 1)
        first_hit = np.minimum.reduceat(masked_rho, safe_ptr, axis=1)
        first_hit[:, empty_seg] = _NO_RANK
        graceable = (prep.lengths >= 2)[None, :] & (first_hit < prep.j_first[None, :])
        if np.any(graceable):
            rows, cols = np.nonzero(graceable)
            corr = np.zeros((n_d, M), dtype=np.float64)
            np.add.at(corr, (rows, np.searchsorted(prep.J, first_hit[rows, cols])), -1.0)
            np.add.at(corr, (rows, prep.j_first_Jidx[cols]), 1.0)
            fn += np.cumsum(corr, axis=1)

    # e = d = 0 has no buffer zones at all: plain point-wise counting
    if e == 0:
        for row in np.flatnonzero(d_values == 0):
            tp[row] = prep.td_cum_J
            fn[row] = prep.fn_strict_cum_J
    return tp, fn


def _auc_for_e(prep: Prepared, e: int, d_values: np.ndarray) -> np.ndarray:
    """AUCs for one pre-buffer size across a chunk of post-buffer sizes."""
    tp, fn = _tp_fn_for_e(prep, e, d_values)

    with np.errstate(invalid="ignore", divide="ignore"):
        precision = tp / prep.cnt_pred_J[None, :]
        p_last = tp / prep.cnt_last_J[None, :]
    precision[:, 0] = 1.0
    if prep.cnt_last_J[0] == 0:
        p_last[:, 0] = 1.0
    recall = tp / (tp + fn)

    d_recall = np.diff(recall, axis=1)
    terms = d_recall * (p_last[:, :-1] + precision[:, 1:]) * 0.5
    aucs = terms.sum(axis=1)

    # recall can dip when extra coverage hardens the onset penalty; fall back
    # to the sorted-by-recall trapezoid for those rare rows
    non_monotone = np.flatnonzero(np.any(d_recall < 0, axis=1))
    for row in non_monotone:
        order = np.argsort(recall[row], kind="stable")
        r_s, pl_s, pf_s = recall[row][order], p_last[row][order], precision[row][order]
        aucs[row] = float(np.sum((r_s[1:] - r_s[:-1]) * (pl_s[:-1] + pf_s[1:]) * 0.5))
    return aucs


def combo_pr_points(prep: Prepared, e: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-threshold (precision, recall) for one combo, one point per grid entry."""
    tp_J, fn_J = _tp_fn_for_e(prep, e, np.array([d], dtype=np.int64))
    counts = np.diff(np.concatenate((prep.J, [prep.U + 1])))
    tp = np.repeat(tp_J[0], counts)
    fn = np.repeat(fn_J[0], counts)
    with np.errstate(invalid="ignore", divide="ignore"):
        precision = tp / prep.cnt_pred
    precision[0] = 1.0
    recall = tp / (tp + fn)
    return precision, recall
