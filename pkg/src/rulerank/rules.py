"""Normal-logic-program rules over encoded tables.

A rule has a positive default part (a conjunction of feature literals) and a
negated exception part (references to abnormal rules, which may themselves
have exceptions).  Rule sets are stratified: an abnormal rule only references
abnormal rules with smaller indices, so evaluation is a simple recursion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .table import EncodedTable, TableLayout
from .values import CATEGORICAL, NUMERIC, Item, Value, num_gt, num_leq, value_equal

OP_LEQ = "leq"
OP_GT = "gt"
OP_EQ = "eq"
OP_NEQ = "neq"

_NUM_OPS = (OP_LEQ, OP_GT)
_CAT_OPS = (OP_EQ, OP_NEQ)


@dataclass(frozen=True)
class Literal:
    """A single feature test bound to a table column."""

    col: int
    op: str
    threshold: float = 0.0
    symbol: Optional[str] = None

    def __post_init__(self) -> None:
        if self.op not in _NUM_OPS + _CAT_OPS:
            raise ValueError(f"bad op {self.op!r}")

    @property
    def is_numeric(self) -> bool:
        return self.op in _NUM_OPS

    def used_key(self) -> tuple:
        """Key identifying this literal and its dual on the same column/value."""
        if self.is_numeric:
            return ("num", self.col, self.threshold)
        return ("cat", self.col, self.symbol)


@dataclass
class Rule:
    head: str
    defaults: list[Literal] = field(default_factory=list)
    exceptions: list[int] = field(default_factory=list)  # abnormal-rule indices


@dataclass
class RuleSet:
    """Learned program: target rules plus indexed abnormal rules."""

    layout: TableLayout
    rules: list[Rule] = field(default_factory=list)
    ab_rules: dict[int, Rule] = field(default_factory=dict)
    ratio: float = 0.5

    def clause_count(self) -> int:
        return len(self.rules) + len(self.ab_rules)

    def predicate_count(self) -> int:
        """Heads plus body literal occurrences (exception calls included)."""
        total = 0
        for r in [*self.rules, *self.ab_rules.values()]:
            total += 1 + len(r.defaults) + len(r.exceptions)
        return total


class Counts(NamedTuple):
    tp: int
    fn: int
    tn: int
    fp: int


# ---------------------------------------------------------------------------
# vectorized evaluation


def literal_mask(lit: Literal, table: EncodedTable, idx: np.ndarray) -> np.ndarray:
    """Boolean mask over idx rows; NaN / kind mismatches never satisfy
    numeric tests, and inequality is true for any kind mismatch."""
    col = table.columns[lit.col]
    if lit.is_numeric:
        vals = col.values[idx]
        with np.errstate(invalid="ignore"):
            return vals <= lit.threshold if lit.op == OP_LEQ else vals > lit.threshold
    code = col.lookup(lit.symbol)
    codes = col.codes[idx]
    return codes == code if lit.op == OP_EQ else codes != code


def rule_mask(
    rule: Rule,
    table: EncodedTable,
    idx: np.ndarray,
    ab_rules: dict[int, Rule],
    _memo: Optional[dict] = None,
) -> np.ndarray:
    """Coverage mask of a rule over idx rows.

    A rule with an empty default part covers nothing (the learner emits such
    a rule only when no literal is selectable, and the caller discards it).
    """
    if not rule.defaults:
        return np.zeros(len(idx), dtype=bool)
    memo = _memo if _memo is not None else {}
    m = literal_mask(rule.defaults[0], table, idx)
    for lit in rule.defaults[1:]:
        if not m.any():
            return m
        sub = idx[m]
        m[m] = literal_mask(lit, table, sub)
    for ab in rule.exceptions:
        if not m.any():
            return m
        sub = idx[m]
        m[m] = ~_ab_mask(ab, table, sub, ab_rules, memo)
    return m


def _ab_mask(ab: int, table: EncodedTable, idx: np.ndarray, ab_rules: dict[int, Rule], memo: dict) -> np.ndarray:
    full = memo.get(ab)
    if full is None:
        all_rows = np.arange(table.n_rows)
        full = rule_mask(ab_rules[ab], table, all_rows, ab_rules, memo)
        memo[ab] = full
    return full[idx]


def covers(
    rule: Rule,
    table: EncodedTable,
    idx: np.ndarray,
    positive: bool,
    ab_rules: Optional[dict[int, Rule]] = None,
) -> np.ndarray:
    """Subset of idx implied by the rule (positive=True) or its complement."""
    m = rule_mask(rule, table, idx, ab_rules or {})
    return idx[m] if positive else idx[~m]


def classify(
    rule: Rule,
    table: EncodedTable,
    pos_idx: np.ndarray,
    neg_idx: np.ndarray,
    ab_rules: Optional[dict[int, Rule]] = None,
) -> tuple[Counts, tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]:
    """Partition positives into tp/fn and negatives into fp/tn by coverage."""
    ab = ab_rules or {}
    memo: dict = {}
    mp = rule_mask(rule, table, pos_idx, ab, memo)
    mn = rule_mask(rule, table, neg_idx, ab, memo)
    tp, fn = pos_idx[mp], pos_idx[~mp]
    fp, tn = neg_idx[mn], neg_idx[~mn]
    return Counts(len(tp), len(fn), len(tn), len(fp)), (tp, fn, tn, fp)


def predict(rs: RuleSet, table: EncodedTable, idx: Optional[np.ndarray] = None) -> np.ndarray:
    """Disjunction over target rules; an example implied by any rule is positive."""
    if idx is None:
        idx = np.arange(table.n_rows)
    out = np.zeros(len(idx), dtype=bool)
    memo: dict = {}
    for r in rs.rules:
        rest = idx[~out]
        if not len(rest):
            break
        out[~out] = rule_mask(r, table, rest, rs.ab_rules, memo)
    return out


# ---------------------------------------------------------------------------
# scalar evaluation over raw items (used by justification and single compares)


def literal_holds(lit: Literal, layout: TableLayout, a: Item, b: Optional[Item] = None) -> bool:
    """Evaluate one literal against raw item values (pair or single mode)."""
    col = layout.columns[lit.col]
    if layout.mode == "pair":
        if lit.is_numeric:
            va, vb = a.values[col.index], b.values[col.index]
            diff: Value = None
            if isinstance(va, float) and isinstance(vb, float):
                diff = va - vb
            return num_leq(diff, lit.threshold) if lit.op == OP_LEQ else num_gt(diff, lit.threshold)
        cell = (a if col.side == "A" else b).values[col.index]
    else:
        cell = a.values[col.index]
        if lit.is_numeric:
            return num_leq(cell, lit.threshold) if lit.op == OP_LEQ else num_gt(cell, lit.threshold)
    eq = value_equal(cell, lit.symbol)
    return eq if lit.op == OP_EQ else not eq


def rule_holds(rule: Rule, rs: RuleSet, a: Item, b: Optional[Item] = None) -> bool:
    if not rule.defaults:
        return False
    for lit in rule.defaults:
        if not literal_holds(lit, rs.layout, a, b):
            return False
    for ab in rule.exceptions:
        if rule_holds(rs.ab_rules[ab], rs, a, b):
            return False
    return True


def ruleset_holds(rs: RuleSet, a: Item, b: Optional[Item] = None) -> bool:
    return any(rule_holds(r, rs, a, b) for r in rs.rules)


# ---------------------------------------------------------------------------
# serialization


def _literal_to_dict(lit: Literal, layout: TableLayout) -> dict:
    d: dict = {"column": layout.columns[lit.col].key, "op": lit.op}
    if lit.is_numeric:
        d["threshold"] = lit.threshold
    else:
        d["symbol"] = lit.symbol
    return d


def _literal_from_dict(d: dict, layout: TableLayout) -> Literal:
    col = layout.col_index(d["column"])
    if d["op"] in _NUM_OPS:
        return Literal(col, d["op"], threshold=float(d["threshold"]))
    return Literal(col, d["op"], symbol=d["symbol"])


def _rule_to_dict(rule: Rule, layout: TableLayout) -> dict:
    return {
        "head": rule.head,
        "defaults": [_literal_to_dict(l, layout) for l in rule.defaults],
        "exceptions": list(rule.exceptions),
    }


def _rule_from_dict(d: dict, layout: TableLayout) -> Rule:
    return Rule(
        head=d["head"],
        defaults=[_literal_from_dict(x, layout) for x in d["defaults"]],
        exceptions=list(d["exceptions"]),
    )


def ruleset_to_dict(rs: RuleSet) -> dict:
    return {
        "layout": rs.layout.to_dict(),
        "ratio": rs.ratio,
        "rules": [_rule_to_dict(r, rs.layout) for r in rs.rules],
        "ab_rules": [
            {"index": i, **_rule_to_dict(r, rs.layout)} for i, r in sorted(rs.ab_rules.items())
        ],
    }


def ruleset_from_dict(d: dict) -> RuleSet:
    layout = TableLayout.from_dict(d["layout"])
    return RuleSet(
        layout=layout,
        rules=[_rule_from_dict(x, layout) for x in d["rules"]],
        ab_rules={x["index"]: _rule_from_dict(x, layout) for x in d["ab_rules"]},
        ratio=float(d["ratio"]),
    )
