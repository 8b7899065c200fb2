"""Native explanations for comparator predictions.

Two formats mirror each other: an English proof tree, and the involved rules
re-printed with [T]/[F] marks on each evaluated call.  Both derive from one
scalar evaluation pass, so every annotation agrees with the literal evaluator
by construction, and the tree's root truth equals the prediction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import SchemaMismatch
from .program_text import _head_text, _literal_text, format_threshold
from .rules import OP_EQ, OP_GT, OP_LEQ, Literal, Rule, RuleSet, literal_holds, rule_holds
from .table import TableLayout
from .values import Item, Value

Binding = tuple[str, str, Value]  # (feature, variable, value)


@dataclass
class ProofNode:
    kind: str  # "rule" | "literal" | "exception"
    text: str
    holds: bool
    bindings: list[Binding] = field(default_factory=list)
    children: list["ProofNode"] = field(default_factory=list)


def _binding_value(v: Value) -> str:
    if v is None:
        return "''"
    if isinstance(v, str):
        return "'" + v + "'"
    return repr(v)


def _literal_bindings(lit: Literal, layout: TableLayout, a: Item, b: Optional[Item]) -> list[Binding]:
    col = layout.columns[lit.col]
    if layout.mode == "pair":
        if lit.is_numeric:
            return [
                (col.feature, "A", a.values[col.index]),
                (col.feature, "B", b.values[col.index]),
            ]
        item = a if col.side == "A" else b
        return [(col.feature, col.side, item.values[col.index])]
    return [(col.feature, "X", a.values[col.index])]


def _literal_phrase(lit: Literal, layout: TableLayout) -> str:
    col = layout.columns[lit.col]
    f = col.feature
    if lit.is_numeric:
        rel = "greater than" if lit.op == OP_GT else "less equal to"
        t = format_threshold(lit.threshold)
        if layout.mode == "pair":
            return f"the {f} value of A minus the {f} value of B should be {rel} {t}"
        return f"the {f} value of X should be {rel} {t}"
    var = col.side if layout.mode == "pair" else "X"
    if lit.symbol is None:
        verb = "should be missing" if lit.op == OP_EQ else "should not be missing"
        return f"the {f} value of {var} {verb}"
    verb = "should equal" if lit.op == OP_EQ else "should not equal"
    return f"the {f} value of {var} {verb} '{lit.symbol}'"


def _root_text(rs: RuleSet) -> str:
    if rs.layout.mode == "pair" and rs.layout.head == "better":
        return "the item A is better than item B"
    return _head_text(rs.layout.head, rs.layout)


def _literal_node(lit: Literal, rs: RuleSet, a: Item, b: Optional[Item]) -> ProofNode:
    return ProofNode(
        kind="literal",
        text=_literal_phrase(lit, rs.layout),
        holds=literal_holds(lit, rs.layout, a, b),
        bindings=_literal_bindings(lit, rs.layout, a, b),
    )


def _exception_node(ab: int, rs: RuleSet, a: Item, b: Optional[Item]) -> ProofNode:
    """Node for one negated abnormal call; holds carries the abnormal rule's
    own truth (False means the exception does not apply, so the call succeeds)."""
    args = "A,B" if rs.layout.mode == "pair" else "X"
    ab_rule = rs.ab_rules[ab]
    fired = rule_holds(ab_rule, rs, a, b)
    verb = "applies" if fired else "does not apply"
    node = ProofNode(kind="exception", text=f"the exception ab{ab}({args}) {verb}", holds=fired)
    if fired:
        node.children = _holding_children(ab_rule, rs, a, b)
    else:
        node.children = [_failure_node(ab_rule, rs, a, b)]
    return node


def _holding_children(rule: Rule, rs: RuleSet, a: Item, b: Optional[Item]) -> list[ProofNode]:
    """Children of a rule that holds: every default plus every exception call."""
    nodes = [_literal_node(l, rs, a, b) for l in rule.defaults]
    nodes += [_exception_node(i, rs, a, b) for i in rule.exceptions]
    return nodes


def _failure_node(rule: Rule, rs: RuleSet, a: Item, b: Optional[Item]) -> ProofNode:
    """First failing call of a rule that does not hold."""
    for lit in rule.defaults:
        node = _literal_node(lit, rs, a, b)
        if not node.holds:
            return node
    for ab in rule.exceptions:
        node = _exception_node(ab, rs, a, b)
        if node.holds:  # the abnormal rule fired, so the negated call failed
            return node
    raise AssertionError("failure node requested for a rule that holds")


def explain(cmp, a: Item, b: Item) -> ProofNode:
    """Proof tree for the comparator's verdict on the ordered pair (a, b).

    When the prediction is true the tree is rooted at the first firing rule;
    otherwise it enumerates every rule with its first failing call.
    """
    rs = cmp.ruleset
    _check_items(cmp, a, b)
    text = _root_text(rs)
    for rule in rs.rules:
        if rule_holds(rule, rs, a, b):
            root = ProofNode(kind="rule", text=text, holds=True)
            root.children = _holding_children(rule, rs, a, b)
            _collect_bindings(root)
            return root
    root = ProofNode(kind="rule", text=text, holds=False)
    for i, rule in enumerate(rs.rules):
        wrap = ProofNode(kind="rule", text=f"rule {i + 1} fails", holds=False)
        wrap.children = [_failure_node(rule, rs, a, b)]
        root.children.append(wrap)
    _collect_bindings(root)
    return root


def _check_items(cmp, a: Item, b: Item) -> None:
    n = len(cmp.schema.features)
    for item in (a, b):
        if len(item.values) != n:
            raise SchemaMismatch(f"item {item.id!r} does not conform to the schema")


def _collect_bindings(node: ProofNode) -> list[Binding]:
    seen = list(node.bindings)
    for c in node.children:
        for bnd in _collect_bindings(c):
            if bnd not in seen:
                seen.append(bnd)
    node.bindings = seen
    return seen


def _node_suffix(node: ProofNode) -> str:
    ok = (not node.holds) if node.kind == "exception" else node.holds
    return "DOES HOLD" if ok else "DOES NOT HOLD"


def render_bindings(bindings: list[Binding]) -> str:
    parts = [f"{f}({var}, {_binding_value(v)})" for f, var, v in bindings]
    return "{" + ", ".join(parts) + "}"


def render_proof(root: ProofNode, example_no: Optional[int] = None) -> str:
    lines: list[str] = []
    if example_no is not None:
        lines.append(f"Proof Tree for example number {example_no} :")
    because = " because" if root.children else ""
    lines.append(f"{root.text} {_node_suffix(root)}{because}")

    def walk(node: ProofNode, depth: int) -> None:
        indent = "    " * depth
        lines.append(f"{indent}{node.text} ({_node_suffix(node)})")
        for c in node.children:
            walk(c, depth + 1)

    for c in root.children:
        walk(c, 1)
    if root.bindings:
        lines.append(render_bindings(root.bindings))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# [T]/[F] annotated rules


@dataclass
class RuleRecord:
    """One rule's evaluation trace: the rule's truth plus a mark per body
    call in clause order (None = never evaluated)."""

    head: str
    rule: Rule
    holds: bool
    marks: list[Optional[bool]]


def rule_record(rule: Rule, rs: RuleSet, a: Item, b: Optional[Item]) -> RuleRecord:
    marks: list[Optional[bool]] = []
    alive = True
    for lit in rule.defaults:
        if alive:
            v = literal_holds(lit, rs.layout, a, b)
            marks.append(v)
            alive = v
        else:
            marks.append(None)
    for ab in rule.exceptions:
        if alive:
            fired = rule_holds(rs.ab_rules[ab], rs, a, b)
            marks.append(not fired)
            alive = not fired
        else:
            marks.append(None)
    return RuleRecord(head=rule.head, rule=rule, holds=alive, marks=marks)


def annotate_records(cmp, a: Item, b: Item) -> list[RuleRecord]:
    """Evaluation records of the rules involved in the verdict: the firing
    rule (or all rules on a false prediction) plus every abnormal rule whose
    call got evaluated, transitively."""
    rs = cmp.ruleset
    _check_items(cmp, a, b)
    firing = next((r for r in rs.rules if rule_holds(r, rs, a, b)), None)
    top = [firing] if firing is not None else list(rs.rules)
    records = [rule_record(r, rs, a, b) for r in top]
    queue = records[:]
    seen_abs: set[int] = set()
    while queue:
        rec = queue.pop(0)
        n_def = len(rec.rule.defaults)
        for k, ab in enumerate(rec.rule.exceptions):
            if rec.marks[n_def + k] is None or ab in seen_abs:
                continue
            seen_abs.add(ab)
            ab_rec = rule_record(rs.ab_rules[ab], rs, a, b)
            records.append(ab_rec)
            queue.append(ab_rec)
    return records


def _render_record(rec: RuleRecord, rs: RuleSet) -> str:
    def mark(m: Optional[bool]) -> str:
        return "" if m is None else ("[T]" if m else "[F]")

    args = "A,B" if rs.layout.mode == "pair" else "X"
    parts = []
    for lit, m in zip(rec.rule.defaults, rec.marks):
        parts.append(mark(m) + _literal_text(lit, rs.layout, "3"))
    for k, ab in enumerate(rec.rule.exceptions):
        m = rec.marks[len(rec.rule.defaults) + k]
        parts.append(f"{mark(m)}not ab{ab}({args})")
    head = mark(rec.holds) + _head_text(rec.head, rs.layout)
    return f"{head} :- {', '.join(parts)}."


def annotate(cmp, a: Item, b: Item) -> str:
    """The involved rules with [T]/[F] marks, then the value bindings."""
    rs = cmp.ruleset
    records = annotate_records(cmp, a, b)
    lines = [_render_record(rec, rs) for rec in records]
    bindings: list[Binding] = []
    for rec in records:
        for lit, m in zip(rec.rule.defaults, rec.marks):
            if m is None:
                continue
            for bnd in _literal_bindings(lit, rs.layout, a, b):
                if bnd not in bindings:
                    bindings.append(bnd)
    if bindings:
        lines.append(render_bindings(bindings))
    return "\n".join(lines)
