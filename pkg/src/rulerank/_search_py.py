"""Pure-Python literal-search kernels.

Fallback backend used when the compiled extension is unavailable (or when
RULERANK_PURE=1).  Bit-identical to the compiled kernels: counts come from
prefix sums / tallies and gains from scalar log2 on the same integer ratios.

Gain of a candidate covering tp positives and fp negatives out of P/N totals:

    0                                             if tp == 0
    tp * (log2(tp/(tp+fp)) - log2(P/(P+N)))       otherwise

Candidates with tp + fp == 0 are skipped entirely (no example covered).
"""

from __future__ import annotations

import math

import numpy as np

_NEG_INF = float("-inf")


def _gain(tp: int, fp: int, pos_total: int, neg_total: int) -> float:
    if tp == 0:
        return 0.0
    return tp * (math.log2(tp / (tp + fp)) - math.log2(pos_total / (pos_total + neg_total)))


def best_numeric_split(xs_pos: np.ndarray, xs_neg: np.ndarray, banned: np.ndarray):
    """Best threshold literal over one numeric column.

    xs_pos/xs_neg hold the column's values for the positive/negative example
    sets (NaN = cell not numeric; such rows satisfy neither <= nor >).
    banned thresholds are excluded for both directions.

    Returns (found, gain, is_leq, threshold).
    """
    pos = np.sort(xs_pos[~np.isnan(xs_pos)])
    neg = np.sort(xs_neg[~np.isnan(xs_neg)])
    p_total, n_total = len(xs_pos), len(xs_neg)
    values = np.unique(np.concatenate([pos, neg]))
    if banned.size and values.size:
        values = values[~np.isin(values, banned)]
    if values.size == 0:
        return False, _NEG_INF, True, 0.0

    pos_prefix = np.searchsorted(pos, values, side="right")
    neg_prefix = np.searchsorted(neg, values, side="right")
    p_fin, n_fin = len(pos), len(neg)

    best_leq = _NEG_INF
    best_leq_thr = 0.0
    best_gt = _NEG_INF
    best_gt_thr = 0.0
    for v, cp, cn in zip(values.tolist(), pos_prefix.tolist(), neg_prefix.tolist()):
        g = _gain(cp, cn, p_total, n_total)  # cp + cn >= 1: v is an observed value
        if g > best_leq:
            best_leq, best_leq_thr = g, v
        tp, fp = p_fin - cp, n_fin - cn
        if tp + fp > 0:
            g = _gain(tp, fp, p_total, n_total)
            if g > best_gt:
                best_gt, best_gt_thr = g, v

    if best_gt > best_leq:
        return True, best_gt, False, best_gt_thr
    return True, best_leq, True, best_leq_thr


def best_categorical_split(codes_pos: np.ndarray, codes_neg: np.ndarray, n_codes: int, banned: np.ndarray):
    """Best equality / inequality literal over one categorical column.

    Candidate symbols are the codes observed in the current example sets.
    banned codes are excluded for both directions.

    Returns (found, gain, is_eq, code).
    """
    cp = np.bincount(codes_pos[codes_pos >= 0], minlength=n_codes)
    cn = np.bincount(codes_neg[codes_neg >= 0], minlength=n_codes)
    p_total, n_total = len(codes_pos), len(codes_neg)
    allowed = np.ones(n_codes, dtype=bool)
    if banned.size:
        allowed[banned] = False

    best_eq = _NEG_INF
    best_eq_code = -1
    best_neq = _NEG_INF
    best_neq_code = -1
    for c in range(n_codes):
        if not allowed[c] or cp[c] + cn[c] == 0:
            continue
        g = _gain(int(cp[c]), int(cn[c]), p_total, n_total)
        if g > best_eq:
            best_eq, best_eq_code = g, c
        tp, fp = p_total - int(cp[c]), n_total - int(cn[c])
        if tp + fp > 0:
            g = _gain(tp, fp, p_total, n_total)
            if g > best_neq:
                best_neq, best_neq_code = g, c

    if best_eq_code < 0 and best_neq_code < 0:
        return False, _NEG_INF, True, -1
    if best_neq > best_eq:
        return True, best_neq, False, best_neq_code
    return True, best_eq, True, best_eq_code
