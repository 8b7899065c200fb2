"""Render rule sets as normal-logic-program text and parse that text back.

Pair-mode clauses follow the two-variable comparator syntax:

    better(A,B) :- rm(A,NA5), rm(B,NB5), NA5-NB5>0.156, not ab5(A,B).

A numeric literal on feature f (original position k) prints as the three-atom
phrase ``f(A,NAk), f(B,NBk), NAk-NBk OP t`` with OP in {>, =<}; categorical
literals print as ``f(A,'v')`` / ``not f(A,'v')`` on the bound side; exception
references as ``not abN(A,B)``.  Classifier-mode (single variable) clauses use
``f(X)`` for boolean-true tests, ``f(X,'v')`` otherwise, and ``f(X,Nk), Nk OP t``
for numeric tests.

Thresholds print to 3 decimals by default (trailing zeros trimmed, at least
one decimal kept); precision="full" emits shortest round-trip floats so that
parse(emit(rs)) reproduces every literal exactly.
"""

from __future__ import annotations

import re
from typing import Optional

from .errors import ProgramSyntaxError
from .rules import OP_EQ, OP_GT, OP_LEQ, OP_NEQ, Literal, Rule, RuleSet
from .table import TableLayout
from .values import NUMERIC

_PLAIN_NAME = re.compile(r"[A-Za-z_]\w*$")
_AB_NAME = re.compile(r"ab(\d+)$")
_VAR = re.compile(r"[A-Z]\w*$")
_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")


def format_threshold(t: float, precision: str = "3") -> str:
    if precision == "full":
        return repr(t)
    s = f"{t:.3f}".rstrip("0")
    if s.endswith("."):
        s += "0"
    return s


def _pred(name: str) -> str:
    """Quote predicate names that would be ambiguous or unparseable."""
    if _PLAIN_NAME.match(name) and not _AB_NAME.match(name):
        return name
    return "'" + name.replace("'", "''") + "'"


def _sym(symbol: Optional[str]) -> str:
    if symbol is None:
        return "''"
    return "'" + symbol.replace("'", "''") + "'"


def _literal_text(lit: Literal, layout: TableLayout, precision: str) -> str:
    col = layout.columns[lit.col]
    f = _pred(col.feature)
    if layout.mode == "pair":
        if lit.is_numeric:
            k = col.index
            op = ">" if lit.op == OP_GT else "=<"
            t = format_threshold(lit.threshold, precision)
            return f"{f}(A,NA{k}), {f}(B,NB{k}), NA{k}-NB{k}{op}{t}"
        side = col.side
        atom = f"{f}({side},{_sym(lit.symbol)})"
        return atom if lit.op == OP_EQ else f"not {atom}"
    if lit.is_numeric:
        k = col.index
        op = ">" if lit.op == OP_GT else "=<"
        t = format_threshold(lit.threshold, precision)
        return f"{f}(X,N{k}), N{k}{op}{t}"
    if lit.symbol == "true":
        atom = f"{f}(X)"
    else:
        atom = f"{f}(X,{_sym(lit.symbol)})"
    return atom if lit.op == OP_EQ else f"not {atom}"


def _head_text(name: str, layout: TableLayout) -> str:
    args = "A,B" if layout.mode == "pair" else "X"
    return f"{name}({args})"


def clause_text(rule: Rule, layout: TableLayout, precision: str = "3") -> str:
    body = [_literal_text(l, layout, precision) for l in rule.defaults]
    args = "A,B" if layout.mode == "pair" else "X"
    body += [f"not ab{i}({args})" for i in rule.exceptions]
    return f"{_head_text(rule.head, layout)} :- {', '.join(body)}."


def emit(rs: RuleSet, precision: str = "3") -> str:
    """Program text: target clauses in order, then abnormal clauses by index."""
    lines = [clause_text(r, rs.layout, precision) for r in rs.rules]
    lines += [clause_text(r, rs.layout, precision) for _, r in sorted(rs.ab_rules.items())]
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# parsing


def _split_top_level(text: str, line_no: int, offset: int) -> list[tuple[str, int]]:
    """Split on commas outside parentheses and quotes; returns (chunk, column)."""
    items: list[tuple[str, int]] = []
    depth = 0
    in_quote = False
    start = 0
    i = 0
    while i < len(text):
        ch = text[i]
        if in_quote:
            if ch == "'":
                if i + 1 < len(text) and text[i + 1] == "'":
                    i += 1
                else:
                    in_quote = False
        elif ch == "'":
            in_quote = True
        elif ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ProgramSyntaxError("unbalanced ')'", line_no, offset + i + 1)
        elif ch == "," and depth == 0:
            items.append((text[start:i], offset + start + 1))
            start = i + 1
        i += 1
    if in_quote:
        raise ProgramSyntaxError("unterminated quote", line_no, offset + len(text))
    if depth != 0:
        raise ProgramSyntaxError("unbalanced '('", line_no, offset + len(text))
    items.append((text[start:], offset + start + 1))
    return items


_ATOM = re.compile(r"\s*(?P<name>[A-Za-z_]\w*|'(?:[^']|'')*')\s*\(\s*(?P<args>.*)\s*\)\s*$")
_CMP = re.compile(
    r"\s*(?P<v1>[A-Z]\w*)\s*(?:-\s*(?P<v2>[A-Z]\w*)\s*)?(?P<op>>|=<)\s*(?P<num>\S+)\s*$"
)


def _unquote(name: str) -> str:
    if name.startswith("'"):
        return name[1:-1].replace("''", "'")
    return name


def _parse_atom(text: str, line_no: int, col_no: int):
    m = _ATOM.match(text)
    if not m:
        raise ProgramSyntaxError(f"expected an atom, got {text.strip()!r}", line_no, col_no)
    name = _unquote(m.group("name"))
    args = [a.strip() for a in _split_args(m.group("args"))]
    return name, args


def _split_args(args: str) -> list[str]:
    out: list[str] = []
    in_quote = False
    start = 0
    i = 0
    while i < len(args):
        ch = args[i]
        if in_quote:
            if ch == "'":
                if i + 1 < len(args) and args[i + 1] == "'":
                    i += 1
                else:
                    in_quote = False
        elif ch == "'":
            in_quote = True
        elif ch == ",":
            out.append(args[start:i])
            start = i + 1
        i += 1
    out.append(args[start:])
    return out


class _ClauseParser:
    def __init__(self, layout: TableLayout):
        self.layout = layout
        self.num_col_by_feature = {
            c.feature: i for i, c in enumerate(layout.columns) if c.kind == NUMERIC
        }
        self.cat_col: dict[tuple[str, Optional[str]], int] = {}
        for i, c in enumerate(layout.columns):
            if c.kind != NUMERIC:
                self.cat_col[(c.feature, c.side)] = i

    def parse_clause(self, line: str, line_no: int) -> tuple[str, Rule]:
        body_sep = line.find(":-")
        if body_sep < 0:
            raise ProgramSyntaxError("expected ':-'", line_no, len(line))
        head_text = line[:body_sep]
        body_text = line[body_sep + 2 :].strip()
        if not body_text.endswith("."):
            raise ProgramSyntaxError("clause must end with '.'", line_no, len(line))
        body_text = body_text[:-1]
        if not body_text.strip():
            raise ProgramSyntaxError("empty clause body", line_no, body_sep + 3)

        head_name, head_args = _parse_atom(head_text, line_no, 1)
        want_args = ["A", "B"] if self.layout.mode == "pair" else ["X"]
        if head_args != want_args:
            raise ProgramSyntaxError(
                f"head arguments must be ({','.join(want_args)})", line_no, 1
            )

        rule = Rule(head=head_name)
        bindings: dict[str, str] = {}  # variable -> feature it was bound by
        for chunk, col_no in _split_top_level(body_text, line_no, body_sep + 2):
            self._parse_item(chunk, line_no, col_no, rule, bindings)
        return head_name, rule

    def _parse_item(self, chunk: str, line_no: int, col_no: int, rule: Rule, bindings: dict) -> None:
        text = chunk.strip()
        if not text:
            raise ProgramSyntaxError("empty body item", line_no, col_no)

        cmp_m = _CMP.match(text)
        if cmp_m and "(" not in text:
            self._parse_comparison(cmp_m, line_no, col_no, rule, bindings)
            return

        negated = False
        if text.startswith("not "):
            negated = True
            text = text[4:]
        name, args = _parse_atom(text, line_no, col_no)

        ab_m = _AB_NAME.match(name)
        if ab_m and not name.startswith("'"):
            if not negated:
                raise ProgramSyntaxError(f"exception call {name} must be negated", line_no, col_no)
            rule.exceptions.append(int(ab_m.group(1)))
            return

        if self.layout.mode == "pair":
            if len(args) != 2 or args[0] not in ("A", "B"):
                raise ProgramSyntaxError(f"bad atom arguments in {text!r}", line_no, col_no)
            side, payload = args[0], args[1]
        else:
            if len(args) == 1 and args[0] == "X":
                side, payload = None, "'true'"
            elif len(args) == 2 and args[0] == "X":
                side, payload = None, args[1]
            else:
                raise ProgramSyntaxError(f"bad atom arguments in {text!r}", line_no, col_no)

        if payload.startswith("'"):
            symbol: Optional[str] = _unquote(payload)
            if symbol == "":
                symbol = None
            key = (name, side)
            if key not in self.cat_col:
                raise ProgramSyntaxError(f"unknown categorical feature {name!r}", line_no, col_no)
            rule.defaults.append(
                Literal(self.cat_col[key], OP_NEQ if negated else OP_EQ, symbol=symbol)
            )
            return

        if _VAR.match(payload):
            if negated:
                raise ProgramSyntaxError("numeric binder cannot be negated", line_no, col_no)
            if name not in self.num_col_by_feature:
                raise ProgramSyntaxError(f"unknown numeric feature {name!r}", line_no, col_no)
            bindings[payload] = name
            return
        raise ProgramSyntaxError(f"bad atom payload {payload!r}", line_no, col_no)

    def _parse_comparison(self, m, line_no: int, col_no: int, rule: Rule, bindings: dict) -> None:
        v1, v2, op, num = m.group("v1"), m.group("v2"), m.group("op"), m.group("num")
        if not _NUMBER.match(num):
            raise ProgramSyntaxError(f"bad number {num!r}", line_no, col_no)
        if v1 not in bindings:
            raise ProgramSyntaxError(f"unbound variable {v1}", line_no, col_no)
        feature = bindings[v1]
        if self.layout.mode == "pair":
            if v2 is None:
                raise ProgramSyntaxError("pair comparison needs NAk-NBk", line_no, col_no)
            if v2 not in bindings or bindings[v2] != feature:
                raise ProgramSyntaxError(f"variable {v2} not bound to {feature!r}", line_no, col_no)
        elif v2 is not None:
            raise ProgramSyntaxError("single-mode comparison uses one variable", line_no, col_no)
        col = self.num_col_by_feature[feature]
        rule.defaults.append(
            Literal(col, OP_GT if op == ">" else OP_LEQ, threshold=float(num))
        )


def parse(text: str, layout: TableLayout, ratio: float = 0.5) -> RuleSet:
    """Parse program text produced by emit back into a rule set.

    The layout (normally taken from the serialized model bundle) supplies the
    column geometry the literals bind to.
    """
    parser = _ClauseParser(layout)
    rules: list[Rule] = []
    ab_rules: dict[int, Rule] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        head_name, rule = parser.parse_clause(line, line_no)
        ab_m = _AB_NAME.match(head_name)
        if ab_m:
            idx = int(ab_m.group(1))
            if idx in ab_rules:
                raise ProgramSyntaxError(f"duplicate abnormal head ab{idx}", line_no, 1)
            ab_rules[idx] = rule
        else:
            if head_name != layout.head:
                raise ProgramSyntaxError(
                    f"head {head_name!r} does not match target {layout.head!r}", line_no, 1
                )
            rules.append(rule)
    for r in [*rules, *ab_rules.values()]:
        for i in r.exceptions:
            if i not in ab_rules:
                raise ProgramSyntaxError(f"undefined exception reference ab{i}", 1, 1)
    return RuleSet(layout=layout, rules=rules, ab_rules=ab_rules, ratio=ratio)
