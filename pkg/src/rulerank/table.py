"""Column-major encoded tables the rule learner operates on.

Numeric columns are float64 arrays with NaN for missing (or otherwise
non-numeric) cells.  Categorical columns are integer code arrays with a
per-column symbol list:

* code 0      -- missing
* codes 1..K  -- observed symbols in lexicographic order
* code -1     -- a numeric cell in a categorical column (equal to no symbol)

Code order therefore matches lexicographic symbol order with missing
(rendered as the empty string) sorting first, which is what the search
tie-breaking relies on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .values import CATEGORICAL, NUMERIC, Schema, Value, _is_number

MISSING_CODE = 0
ALIEN_CODE = -1  # numeric cell in a categorical column


@dataclass(frozen=True)
class TableColumn:
    key: str            # unique column key, e.g. "rm" or "color@A"
    feature: str        # original feature name
    index: int          # original feature position (used for NAk/NBk naming)
    kind: str           # NUMERIC or CATEGORICAL
    side: Optional[str] = None  # "A" / "B" for the categorical twins of a pair table


@dataclass(frozen=True)
class TableLayout:
    """Column layout plus the literal-search units it induces.

    mode "single": one column per feature; categorical columns searched alone.
    mode "pair":   numeric-difference columns first, then A/B categorical
    twins; each twin is searched jointly as a literal pair.
    """

    mode: str           # "single" | "pair"
    head: str           # target predicate name
    columns: tuple[TableColumn, ...]
    cat_pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        keys = [c.key for c in self.columns]
        if len(set(keys)) != len(keys):
            raise ValueError("column keys must be unique")

    def col_index(self, key: str) -> int:
        for i, c in enumerate(self.columns):
            if c.key == key:
                return i
        raise KeyError(key)

    def search_units(self) -> list[tuple]:
        """Ordered candidate units: ("num", col) | ("cat", col) | ("pair", i, j)."""
        units: list[tuple] = []
        paired = {i for ij in self.cat_pairs for i in ij}
        for i, c in enumerate(self.columns):
            if c.kind == NUMERIC:
                units.append(("num", i))
            elif i not in paired:
                units.append(("cat", i))
        for i, j in self.cat_pairs:
            units.append(("pair", i, j))
        # keep overall order by column position
        units.sort(key=lambda u: u[1])
        return units

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "head": self.head,
            "columns": [
                {"key": c.key, "feature": c.feature, "index": c.index, "kind": c.kind, "side": c.side}
                for c in self.columns
            ],
            "cat_pairs": [list(ij) for ij in self.cat_pairs],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TableLayout":
        cols = tuple(
            TableColumn(c["key"], c["feature"], c["index"], c["kind"], c.get("side"))
            for c in d["columns"]
        )
        return cls(d["mode"], d["head"], cols, tuple(tuple(ij) for ij in d["cat_pairs"]))


def single_layout(features: Sequence[tuple[str, str]], head: str) -> TableLayout:
    cols = tuple(
        TableColumn(key=name, feature=name, index=i, kind=kind)
        for i, (name, kind) in enumerate(features)
    )
    return TableLayout(mode="single", head=head, columns=cols)


def pair_layout(schema: Schema, head: str = "better") -> TableLayout:
    """Pairwise layout: numeric-difference columns in original feature order,
    then (A, B) categorical twins in original feature order."""
    cols: list[TableColumn] = []
    for i, (name, kind) in enumerate(schema.features):
        if kind == NUMERIC:
            cols.append(TableColumn(key=name, feature=name, index=i, kind=NUMERIC))
    pairs: list[tuple[int, int]] = []
    for i, (name, kind) in enumerate(schema.features):
        if kind == CATEGORICAL:
            a = len(cols)
            cols.append(TableColumn(key=f"{name}@A", feature=name, index=i, kind=CATEGORICAL, side="A"))
            cols.append(TableColumn(key=f"{name}@B", feature=name, index=i, kind=CATEGORICAL, side="B"))
            pairs.append((a, a + 1))
    return TableLayout(mode="pair", head=head, columns=tuple(cols), cat_pairs=tuple(pairs))


@dataclass
class ColumnData:
    kind: str
    values: Optional[np.ndarray] = None          # float64, numeric columns
    codes: Optional[np.ndarray] = None           # int32, categorical columns
    symbols: tuple[Optional[str], ...] = (None,)  # index == code; symbols[0] is missing
    code_of: dict = field(default_factory=dict)

    def lookup(self, symbol: Optional[str]) -> int:
        """Code for a literal's symbol; unseen symbols get a never-matching code."""
        if symbol is None:
            return MISSING_CODE
        return self.code_of.get(symbol, -2)


@dataclass
class EncodedTable:
    layout: TableLayout
    n_rows: int
    columns: list[ColumnData]


def encode_rows(layout: TableLayout, rows: Sequence[Sequence[Value]]) -> EncodedTable:
    """Encode value rows (aligned with the layout's columns) into arrays."""
    n = len(rows)
    cols: list[ColumnData] = []
    for ci, col in enumerate(layout.columns):
        if col.kind == NUMERIC:
            arr = np.full(n, np.nan, dtype=np.float64)
            for r, row in enumerate(rows):
                v = row[ci]
                if _is_number(v):
                    arr[r] = float(v)
            cols.append(ColumnData(kind=NUMERIC, values=arr))
        else:
            seen = sorted({row[ci] for row in rows if isinstance(row[ci], str)})
            code_of = {s: k + 1 for k, s in enumerate(seen)}
            codes = np.empty(n, dtype=np.int32)
            for r, row in enumerate(rows):
                v = row[ci]
                if v is None:
                    codes[r] = MISSING_CODE
                elif isinstance(v, str):
                    codes[r] = code_of[v]
                else:
                    codes[r] = ALIEN_CODE
            cols.append(
                ColumnData(
                    kind=CATEGORICAL,
                    codes=codes,
                    symbols=(None, *seen),
                    code_of=code_of,
                )
            )
    return EncodedTable(layout=layout, n_rows=n, columns=cols)


def single_table(features: Sequence[tuple[str, str]], rows: Iterable[Sequence[Value]], head: str) -> EncodedTable:
    """Convenience builder for classifier-style (non-pair) tables."""
    layout = single_layout(features, head)
    return encode_rows(layout, list(rows))
