"""Greedy rule-set induction: default parts first, then exceptions learned
recursively with the residual positive and negative examples swapped.

One rule grows by repeatedly appending the best literal (or categorical
literal pair) and restricting both example sets to the rows the defaults
cover.  Growth stops when no literal has positive gain, or when the residual
negatives drop to at most ratio * positives -- in the latter case, if any
negatives remain, they become the positives of a recursive call whose rules
are attached as negated exceptions.  The outer loop removes covered positives
and stops when a learned rule covers none of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ExceptionDepthExceeded
from .literal_search import find_best_literal
from .rules import Literal, Rule, RuleSet, literal_mask, rule_mask
from .table import EncodedTable


@dataclass
class _LearnState:
    table: EncodedTable
    ratio: float
    max_depth: int
    floor: int  # minimum positives a rule must newly cover, at every level
    trace: Optional[list]
    ab_rules: dict[int, Rule] = field(default_factory=dict)
    next_ab: int = 0

    def emit(self, kind: str, **payload) -> None:
        if self.trace is not None:
            self.trace.append((kind, payload))


def learn_ruleset(
    table: EncodedTable,
    pos_idx: np.ndarray,
    neg_idx: np.ndarray,
    ratio: float = 0.5,
    max_depth: int = 10,
    min_coverage: float = 0.01,
    trace: Optional[list] = None,
) -> RuleSet:
    """Learn a stratified rule set for the table's head predicate.

    min_coverage keeps the covering loops from chasing noise: every rule,
    exceptions included, must newly cover at least ceil(min_coverage * top
    level positives) examples of its own covering loop (never less than 1),
    else that loop stops.  At 0 this reduces to the plain covers-nothing
    stop, which on large noisy comparison tables yields thousands of
    single-example rules.

    trace, when given, collects (event, payload) tuples for invariant checks:
    "ratio_exit" fires at each default-part termination through the ratio
    branch, "rule_accepted" when the outer loop keeps a rule.
    """
    if ratio < 0:
        raise ValueError("ratio must be >= 0")
    if not 0.0 <= min_coverage < 1.0:
        raise ValueError("min_coverage must be in [0, 1)")
    floor = max(1, int(np.ceil(min_coverage * len(pos_idx))))
    state = _LearnState(
        table=table, ratio=ratio, max_depth=max_depth, floor=floor, trace=trace
    )
    pos_idx = np.asarray(pos_idx, dtype=np.intp)
    neg_idx = np.asarray(neg_idx, dtype=np.intp)
    rules = _cover_positives(state, pos_idx, neg_idx, frozenset(), depth=0)
    for r in rules:
        r.head = table.layout.head
    reachable = _reachable_abs(rules, state.ab_rules)
    return RuleSet(
        layout=table.layout,
        rules=rules,
        ab_rules={i: state.ab_rules[i] for i in sorted(reachable)},
        ratio=ratio,
    )


def _reachable_abs(rules: list[Rule], ab_rules: dict[int, Rule]) -> set[int]:
    seen: set[int] = set()
    queue = [i for r in rules for i in r.exceptions]
    while queue:
        i = queue.pop()
        if i not in seen:
            seen.add(i)
            queue.extend(ab_rules[i].exceptions)
    return seen


def _cover_positives(
    state: _LearnState,
    pos_idx: np.ndarray,
    neg_idx: np.ndarray,
    used: frozenset,
    depth: int,
) -> list[Rule]:
    """Sequential covering: learn rules until the positives are exhausted or
    a rule's new coverage drops below the floor."""
    rules: list[Rule] = []
    remaining = pos_idx
    while len(remaining) > 0:
        rule = _learn_rule(state, remaining, neg_idx, used, depth)
        mask = rule_mask(rule, state.table, remaining, state.ab_rules)
        covered = int(np.count_nonzero(mask))
        if covered < state.floor:
            break
        state.emit("rule_accepted", covered=covered, remaining=len(remaining), depth=depth)
        remaining = remaining[~mask]
        rules.append(rule)
    return rules


def _learn_rule(
    state: _LearnState,
    pos_idx: np.ndarray,
    neg_idx: np.ndarray,
    used: frozenset,
    depth: int,
) -> Rule:
    defaults: list[Literal] = []
    used_now = set(used)
    cur_pos, cur_neg = pos_idx, neg_idx
    exceptions: list[int] = []
    while True:
        found = find_best_literal(state.table, cur_pos, cur_neg, frozenset(used_now))
        if found is None:
            break  # no selectable literal: stop without exceptions
        _, chosen = found
        for lit in chosen:
            defaults.append(lit)
            used_now.add(lit.used_key())
            cur_pos = cur_pos[literal_mask(lit, state.table, cur_pos)]
            cur_neg = cur_neg[literal_mask(lit, state.table, cur_neg)]
        if len(cur_neg) <= len(cur_pos) * state.ratio:
            state.emit(
                "ratio_exit",
                n_pos=len(cur_pos),
                n_neg=len(cur_neg),
                ratio=state.ratio,
                depth=depth,
            )
            if len(cur_neg) > 0:
                if depth + 1 > state.max_depth:
                    raise ExceptionDepthExceeded(
                        f"exception nesting exceeded max_depth={state.max_depth}"
                    )
                ab = _cover_positives(state, cur_neg, cur_pos, frozenset(used_now), depth + 1)
                for r in ab:
                    idx = state.next_ab
                    state.next_ab += 1
                    r.head = f"ab{idx}"
                    state.ab_rules[idx] = r
                    exceptions.append(idx)
            break
    return Rule(head=state.table.layout.head, defaults=defaults, exceptions=exceptions)
