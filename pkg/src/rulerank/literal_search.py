"""Information-gain literal selection over encoded tables.

The per-column split kernels run in a compiled extension when available and
fall back to pure Python otherwise (force the fallback with RULERANK_PURE=1).
Both backends produce bit-identical results; a benchmark comparing them lives
in benchmarks/bench_search.py.
"""

from __future__ import annotations

import math
import os
from typing import Iterable, Optional

import numpy as np

from .rules import OP_EQ, OP_GT, OP_LEQ, OP_NEQ, Counts, Literal, literal_mask
from .table import EncodedTable
from .values import NUMERIC

if os.environ.get("RULERANK_PURE", "") not in ("", "0"):
    from . import _search_py as _impl
else:
    try:
        from . import _search_fast as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _search_py as _impl

_NEG_INF = float("-inf")
_EMPTY_F8 = np.empty(0, dtype=np.float64)
_EMPTY_I4 = np.empty(0, dtype=np.int32)


def search_backend() -> str:
    """Name of the active kernel backend: "compiled" or "pure-python"."""
    return "compiled" if _impl.__name__.endswith("_fast") else "pure-python"


def info_gain(c: Counts) -> float:
    """Gain of a candidate from its classification counts.

    -inf when the candidate covers nothing (tp + fp == 0); zero when it covers
    no positives; otherwise weighted information gain relative to the prior
    positive rate.
    """
    if c.tp + c.fp == 0:
        return _NEG_INF
    if c.tp == 0:
        return 0.0
    total = c.tp + c.fn + c.tn + c.fp
    return c.tp * (math.log2(c.tp / (c.tp + c.fp)) - math.log2((c.tp + c.fn) / total))


def _banned_thresholds(used: Iterable[tuple], col: int) -> np.ndarray:
    ts = sorted(t for kind, c, t in used if kind == "num" and c == col)
    return np.asarray(ts, dtype=np.float64) if ts else _EMPTY_F8


def _banned_codes(used: Iterable[tuple], col: int, table: EncodedTable) -> np.ndarray:
    data = table.columns[col]
    codes = sorted(
        data.lookup(s) for kind, c, s in used if kind == "cat" and c == col
    )
    codes = [c for c in codes if c >= 0]
    return np.asarray(codes, dtype=np.int32) if codes else _EMPTY_I4


def best_numeric_literal(
    table: EncodedTable,
    pos_idx: np.ndarray,
    neg_idx: np.ndarray,
    col: int,
    used: frozenset = frozenset(),
) -> tuple[float, Optional[Literal]]:
    """Max-gain threshold literal on a numeric column, or (-inf, None)."""
    if len(pos_idx) == 0:
        return _NEG_INF, None
    vals = table.columns[col].values
    found, gain, is_leq, thr = _impl.best_numeric_split(
        np.ascontiguousarray(vals[pos_idx]),
        np.ascontiguousarray(vals[neg_idx]),
        _banned_thresholds(used, col),
    )
    if not found:
        return _NEG_INF, None
    return gain, Literal(col, OP_LEQ if is_leq else OP_GT, threshold=float(thr))


def best_categorical_literal(
    table: EncodedTable,
    pos_idx: np.ndarray,
    neg_idx: np.ndarray,
    col: int,
    used: frozenset = frozenset(),
) -> tuple[float, Optional[Literal]]:
    """Max-gain (in)equality literal on a categorical column, or (-inf, None)."""
    if len(pos_idx) == 0:
        return _NEG_INF, None
    data = table.columns[col]
    found, gain, is_eq, code = _impl.best_categorical_split(
        np.ascontiguousarray(data.codes[pos_idx]),
        np.ascontiguousarray(data.codes[neg_idx]),
        len(data.symbols),
        _banned_codes(used, col, table),
    )
    if not found:
        return _NEG_INF, None
    return gain, Literal(col, OP_EQ if is_eq else OP_NEQ, symbol=data.symbols[code])


def best_literal_pair(
    table: EncodedTable,
    pos_idx: np.ndarray,
    neg_idx: np.ndarray,
    col_a: int,
    col_b: int,
    used: frozenset = frozenset(),
) -> tuple[float, Optional[Literal], Optional[Literal]]:
    """Greedy joint test over the A/B categorical twins of one feature.

    Picks the best literal on the A-side column, restricts to the examples it
    covers, then picks the best B-side literal on the restriction.  The
    returned gain scores the joint conjunction; a right literal that adds no
    gain on the restriction is dropped.
    """
    if len(pos_idx) == 0 and len(neg_idx) == 0:
        return _NEG_INF, None, None
    left_gain, left = best_categorical_literal(table, pos_idx, neg_idx, col_a, used)
    if left is None:
        return _NEG_INF, None, None
    e_tp = pos_idx[literal_mask(left, table, pos_idx)]
    e_fp = neg_idx[literal_mask(left, table, neg_idx)]
    right_gain, right = best_categorical_literal(table, e_tp, e_fp, col_b, used)
    if right is None or right_gain <= 0.0:
        return left_gain, left, None
    tp = int(np.count_nonzero(literal_mask(right, table, e_tp)))
    fp = int(np.count_nonzero(literal_mask(right, table, e_fp)))
    joint = info_gain(Counts(tp, len(pos_idx) - tp, len(neg_idx) - fp, fp))
    return joint, left, right


def find_best_literal(
    table: EncodedTable,
    pos_idx: np.ndarray,
    neg_idx: np.ndarray,
    used: frozenset = frozenset(),
) -> Optional[tuple[float, list[Literal]]]:
    """Best candidate across all search units, or None when nothing helps.

    Ties break toward the lowest column, and inside a column toward <= before
    >, equality before inequality, then the smaller threshold / symbol
    (the kernels sweep candidates in that order).  A best gain of zero or
    less counts as no candidate: such a literal cannot specialize a rule.
    The one exception is an empty negative set, where every covering literal
    scores exactly zero and any of them completes the rule.
    """
    best_gain = _NEG_INF
    best: Optional[list[Literal]] = None
    for unit in table.layout.search_units():
        if unit[0] == "num":
            gain, lit = best_numeric_literal(table, pos_idx, neg_idx, unit[1], used)
            lits = [lit] if lit is not None else None
        elif unit[0] == "cat":
            gain, lit = best_categorical_literal(table, pos_idx, neg_idx, unit[1], used)
            lits = [lit] if lit is not None else None
        else:
            gain, left, right = best_literal_pair(table, pos_idx, neg_idx, unit[1], unit[2], used)
            lits = None if left is None else [left] + ([right] if right is not None else [])
        if lits is not None and gain > best_gain:
            best_gain, best = gain, lits
    if best is None or (best_gain <= 0.0 and len(neg_idx) > 0):
        return None
    return best_gain, best
