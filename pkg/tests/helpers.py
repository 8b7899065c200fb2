"""Shared test utilities: brute-force search oracles, random instance
generators, and the hand-built fixture programs.

The oracle enumerates every candidate literal and counts coverage by scanning
raw value rows with the scalar comparison semantics, so it shares no counting
machinery with the prefix-sum kernels it checks.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

import rulerank as rr
from rulerank.pairs import Comparator, PairRow, plot_pairs
from rulerank.rules import OP_EQ, OP_GT, OP_LEQ, OP_NEQ, Literal, Rule, RuleSet
from rulerank.table import encode_rows, pair_layout, single_layout
from rulerank.values import num_gt, num_leq, value_equal

NEG_INF = float("-inf")


# ---------------------------------------------------------------------------
# brute-force oracle


def oracle_gain(tp: int, fp: int, p_total: int, n_total: int) -> float:
    if tp + fp == 0:
        return NEG_INF
    if tp == 0:
        return 0.0
    return tp * (math.log2(tp / (tp + fp)) - math.log2(p_total / (p_total + n_total)))


@dataclass
class Instance:
    """Raw rows plus the layout they were encoded under."""

    layout: object
    rows: list
    pos: list
    neg: list
    used: set

    @property
    def table(self):
        return encode_rows(self.layout, self.rows)


def _cells(inst: Instance, col: int, idx: list):
    return [inst.rows[r][col] for r in idx]


def oracle_best_numeric(inst: Instance, col: int) -> Optional[tuple[float, str, float]]:
    """(gain, op, threshold) of the best numeric candidate, or None."""
    p_total, n_total = len(inst.pos), len(inst.neg)
    if p_total == 0:
        return None
    observed = sorted(
        {v for v in _cells(inst, col, inst.pos + inst.neg) if isinstance(v, float)}
    )
    best_leq = best_gt = None
    for v in observed:
        if ("num", col, v) in inst.used:
            continue
        tp = sum(num_leq(c, v) for c in _cells(inst, col, inst.pos))
        fp = sum(num_leq(c, v) for c in _cells(inst, col, inst.neg))
        g = oracle_gain(tp, fp, p_total, n_total)
        if g > NEG_INF and (best_leq is None or g > best_leq[0]):
            best_leq = (g, OP_LEQ, v)
        tp = sum(num_gt(c, v) for c in _cells(inst, col, inst.pos))
        fp = sum(num_gt(c, v) for c in _cells(inst, col, inst.neg))
        g = oracle_gain(tp, fp, p_total, n_total)
        if g > NEG_INF and (best_gt is None or g > best_gt[0]):
            best_gt = (g, OP_GT, v)
    if best_leq is None and best_gt is None:
        return None
    if best_leq is None or (best_gt is not None and best_gt[0] > best_leq[0]):
        return best_gt
    return best_leq


def _symbol_order(s):
    return "" if s is None else s


def oracle_best_categorical(inst: Instance, col: int, pos=None, neg=None):
    """(gain, op, symbol) of the best categorical candidate, or None."""
    pos = inst.pos if pos is None else pos
    neg = inst.neg if neg is None else neg
    p_total, n_total = len(pos), len(neg)
    if p_total == 0:
        return None
    observed = sorted(
        {v for v in _cells(inst, col, pos + neg) if v is None or isinstance(v, str)},
        key=_symbol_order,
    )
    best_eq = best_neq = None
    for v in observed:
        if ("cat", col, v) in inst.used:
            continue
        tp = sum(value_equal(c, v) for c in _cells(inst, col, pos))
        fp = sum(value_equal(c, v) for c in _cells(inst, col, neg))
        g = oracle_gain(tp, fp, p_total, n_total)
        if g > NEG_INF and (best_eq is None or g > best_eq[0]):
            best_eq = (g, OP_EQ, v)
        tp, fp = p_total - tp, n_total - fp
        g = oracle_gain(tp, fp, p_total, n_total)
        if g > NEG_INF and (best_neq is None or g > best_neq[0]):
            best_neq = (g, OP_NEQ, v)
    if best_eq is None and best_neq is None:
        return None
    if best_eq is None or (best_neq is not None and best_neq[0] > best_eq[0]):
        return best_neq
    return best_eq


def oracle_best_pair(inst: Instance, col_a: int, col_b: int):
    """Stage-wise mirror of the greedy pair search: best left literal, then
    best right literal on the rows the left covers, scored jointly."""
    if len(inst.pos) == 0 and len(inst.neg) == 0:
        return None
    left = oracle_best_categorical(inst, col_a)
    if left is None:
        return None
    lg, lop, lv = left

    def holds(cell, op, v):
        return value_equal(cell, v) if op == OP_EQ else not value_equal(cell, v)

    e_tp = [r for r in inst.pos if holds(inst.rows[r][col_a], lop, lv)]
    e_fp = [r for r in inst.neg if holds(inst.rows[r][col_a], lop, lv)]
    right = oracle_best_categorical(inst, col_b, e_tp, e_fp)
    if right is None or right[0] <= 0.0:
        return lg, left, None
    _, rop, rv = right
    tp = sum(holds(inst.rows[r][col_b], rop, rv) for r in e_tp)
    fp = sum(holds(inst.rows[r][col_b], rop, rv) for r in e_fp)
    joint = oracle_gain(tp, fp, len(inst.pos), len(inst.neg))
    return joint, left, right


def oracle_find_best(inst: Instance):
    """Best candidate over all units; None when the best gain is <= 0."""
    best = None
    for unit in inst.layout.search_units():
        if unit[0] == "num":
            got = oracle_best_numeric(inst, unit[1])
            cand = None if got is None else (got[0], [(unit[1],) + got[1:]])
        elif unit[0] == "cat":
            got = oracle_best_categorical(inst, unit[1])
            cand = None if got is None else (got[0], [(unit[1],) + got[1:]])
        else:
            got = oracle_best_pair(inst, unit[1], unit[2])
            if got is None:
                cand = None
            else:
                g, left, right = got
                lits = [(unit[1],) + left[1:]]
                if right is not None:
                    lits.append((unit[2],) + right[1:])
                cand = (g, lits)
        if cand is not None and (best is None or cand[0] > best[0]):
            best = cand
    if best is None or (best[0] <= 0.0 and len(inst.neg) > 0):
        return None
    return best


def literal_tuple(lit: Literal) -> tuple:
    value = lit.threshold if lit.is_numeric else lit.symbol
    return (lit.col, lit.op, value)


# ---------------------------------------------------------------------------
# random instances


def random_single_instance(rng: random.Random, with_used: bool = True) -> Instance:
    n_feat = rng.randint(1, 4)
    kinds = [rng.choice([rr.NUMERIC, rr.CATEGORICAL]) for _ in range(n_feat)]
    features = [(f"f{k}", kinds[k]) for k in range(n_feat)]
    n_rows = rng.randint(4, 40)
    rows = []
    for _ in range(n_rows):
        row = []
        for kind in kinds:
            u = rng.random()
            if kind == rr.NUMERIC:
                if u < 0.08:
                    row.append(None)
                elif u < 0.12:
                    row.append(rng.choice("xy"))  # stray symbol in a numeric column
                else:
                    row.append(float(rng.randint(-4, 4)))
            else:
                if u < 0.08:
                    row.append(None)
                elif u < 0.12:
                    row.append(float(rng.randint(0, 3)))  # stray number in a categorical column
                else:
                    row.append(rng.choice("abcde"))
        rows.append(row)
    idx = list(range(n_rows))
    rng.shuffle(idx)
    cut = rng.randint(1, n_rows - 1)
    pos, neg = sorted(idx[:cut]), sorted(idx[cut:])
    used = set()
    if with_used and rng.random() < 0.5:
        col = rng.randrange(n_feat)
        cells = [rows[r][col] for r in range(n_rows)]
        if kinds[col] == rr.NUMERIC:
            nums = [c for c in cells if isinstance(c, float)]
            if nums:
                used.add(("num", col, rng.choice(nums)))
        else:
            syms = [c for c in cells if c is None or isinstance(c, str)]
            if syms:
                used.add(("cat", col, rng.choice(syms)))
    return Instance(single_layout(features, "target"), rows, pos, neg, used)


def random_ranked_dataset(rng: random.Random, n_items=None, with_missing=True) -> rr.RankedDataset:
    n_feat = rng.randint(1, 4)
    features = tuple(
        (f"f{k}", rng.choice([rr.NUMERIC, rr.CATEGORICAL])) for k in range(n_feat)
    )
    schema = rr.Schema(features, target="y")
    n = n_items if n_items is not None else rng.randint(4, 20)
    items = []
    for i in range(n):
        vals = []
        for _, kind in features:
            u = rng.random()
            if with_missing and u < 0.08:
                vals.append(None)
            elif kind == rr.NUMERIC:
                vals.append(float(rng.randint(-5, 5)))
            else:
                vals.append(rng.choice("abcd"))
        items.append(rr.Item(id=i, values=tuple(vals), target=float(n - i)))
    return rr.RankedDataset.from_items(schema, items)


def random_pair_instance(rng: random.Random) -> Instance:
    data = random_ranked_dataset(rng)
    n = len(data.items)
    all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rng.shuffle(all_pairs)
    pairs = sorted(all_pairs[: rng.randint(2, min(12, len(all_pairs)))])
    layout, rows = plot_pairs(data, pairs)
    raw = [list(r.values) for r in rows]
    pos = [k for k, r in enumerate(rows) if r.label]
    neg = [k for k, r in enumerate(rows) if not r.label]
    return Instance(layout, raw, pos, neg, set())


# ---------------------------------------------------------------------------
# fixtures


def penguin_table():
    """Boolean encoding of the bird/penguin/cat fixture, background closure
    applied (polly is a bird because penguins are birds)."""
    tbl = rr.single_table(
        [("bird", rr.CATEGORICAL), ("penguin", rr.CATEGORICAL), ("cat", rr.CATEGORICAL)],
        [
            ["true", "false", "false"],   # tweety
            ["true", "false", "false"],   # et
            ["false", "false", "true"],   # kitty
            ["true", "true", "false"],    # polly
        ],
        head="fly",
    )
    return tbl, np.array([0, 1]), np.array([2, 3])


BOSTON_FEATURES = (
    "crim", "zn", "indus", "chas", "nox", "rm", "age",
    "dis", "rad", "tax", "ptratio", "b", "lstat",
)


def boston_schema() -> rr.Schema:
    return rr.Schema(tuple((f, rr.NUMERIC) for f in BOSTON_FEATURES), target="medv")


def example_house_program() -> Comparator:
    """The seven-clause housing comparator used by the justification and
    emission golden tests (two better/2 clauses, five abnormal clauses)."""
    schema = boston_schema()
    layout = pair_layout(schema)
    c = {f: i for i, f in enumerate(BOSTON_FEATURES)}

    def gt(f, t):
        return Literal(c[f], OP_GT, threshold=t)

    def leq(f, t):
        return Literal(c[f], OP_LEQ, threshold=t)

    rules = [
        Rule("better", [gt("rm", 0.156)], [5]),
        Rule("better", [leq("rm", 0.154), leq("crim", -5.806)], []),
    ]
    ab = {
        1: Rule("ab1", [leq("crim", 4.994), gt("indus", 10.72)], []),
        2: Rule("ab2", [leq("age", 2.6), leq("crim", 3.992)], []),
        3: Rule("ab3", [gt("age", -9.0), leq("rm", 0.363)], [1, 2]),
        4: Rule("ab4", [gt("b", -64.79), leq("crim", 6.595)], [3]),
        5: Rule("ab5", [gt("crim", 2.415)], [4]),
    }
    rs = RuleSet(layout=layout, rules=rules, ab_rules=ab, ratio=0.5)
    return Comparator(schema=schema, ruleset=rs)


def house_item(item_id, **feature_values) -> rr.Item:
    vals = [0.0] * len(BOSTON_FEATURES)
    for name, v in feature_values.items():
        vals[BOSTON_FEATURES.index(name)] = v
    return rr.Item(id=item_id, values=tuple(vals), target=0.0)


def sign_dataset(n: int = 100) -> rr.RankedDataset:
    """Evenly spaced single-feature data whose target equals the feature."""
    schema = rr.Schema((("size", rr.NUMERIC),), target="score")
    items = [rr.Item(i, (float(i),), float(i)) for i in range(n)]
    return rr.RankedDataset.from_items(schema, items)


def kendall_tau(order: list, truth: list) -> float:
    """Rank correlation between two orderings of the same distinct items."""
    pos = {item: k for k, item in enumerate(truth)}
    ranks = [pos[item] for item in order]
    n = len(ranks)
    concordant = discordant = 0
    for i in range(n):
        for j in range(i + 1, n):
            if ranks[i] < ranks[j]:
                concordant += 1
            else:
                discordant += 1
    total = n * (n - 1) // 2
    return (concordant - discordant) / total if total else 1.0
