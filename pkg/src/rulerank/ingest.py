"""CSV loading, schema inference, and seeded train/test splitting.

A column is numeric iff every non-empty cell parses as a finite real;
otherwise it is categorical and non-empty cells are kept as exact text.
Empty cells become missing.  The target column must be fully numeric.
"""

from __future__ import annotations

import csv
import math
import os
from typing import Optional

import numpy as np

from .errors import (
    EmptyColumn,
    EmptyDataset,
    MissingTarget,
    NonNumericTarget,
    RaggedRow,
)
from .values import CATEGORICAL, NUMERIC, Item, RankedDataset, Schema


def _parse_number(text: str) -> Optional[float]:
    try:
        f = float(text)
    except ValueError:
        return None
    return f if math.isfinite(f) else None


def load_csv(path: str | os.PathLike, target_column: str) -> RankedDataset:
    """Load an RFC-4180-style CSV (header row, UTF-8, comma delimiter)."""
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyDataset(f"{path}: file is empty")
        rows = list(reader)

    header = [h.strip() for h in header]
    if target_column not in header:
        raise MissingTarget(f"column {target_column!r} not in header {header}")
    if not rows:
        raise EmptyDataset(f"{path}: no data rows")

    for lineno, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise RaggedRow(f"{path}:{lineno}: expected {len(header)} cells, got {len(row)}")

    tgt_col = header.index(target_column)
    targets = []
    for lineno, row in enumerate(rows, start=2):
        f = _parse_number(row[tgt_col].strip())
        if f is None:
            raise NonNumericTarget(f"{path}:{lineno}: target cell {row[tgt_col]!r} is not a finite number")
        targets.append(f)

    feature_cols = [i for i in range(len(header)) if i != tgt_col]
    kinds = []
    for c in feature_cols:
        cells = [row[c].strip() for row in rows]
        non_empty = [x for x in cells if x != ""]
        if not non_empty:
            raise EmptyColumn(f"{path}: column {header[c]!r} is entirely empty")
        numeric = all(_parse_number(x) is not None for x in non_empty)
        kinds.append(NUMERIC if numeric else CATEGORICAL)

    schema = Schema(
        tuple((header[c], k) for c, k in zip(feature_cols, kinds)),
        target=target_column,
    )

    items = []
    for rid, (row, tgt) in enumerate(zip(rows, targets)):
        vals = []
        for c, kind in zip(feature_cols, kinds):
            cell = row[c].strip()
            if cell == "":
                vals.append(None)
            elif kind == NUMERIC:
                vals.append(_parse_number(cell))
            else:
                vals.append(cell)
        items.append(Item(id=rid, values=tuple(vals), target=tgt))

    return RankedDataset.from_items(schema, items)


def split(data: RankedDataset, train_fraction: float, seed: int) -> tuple[RankedDataset, RankedDataset]:
    """Deterministic shuffled partition; each side re-sorted by target descending.

    Train size is round(train_fraction * n).
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    n = len(data.items)
    perm = np.random.default_rng(seed).permutation(n)
    n_train = int(round(train_fraction * n))
    train_ids = perm[:n_train]
    test_ids = perm[n_train:]
    # from_items re-sorts; passing items in ingest order keeps tie-order stable
    train = RankedDataset.from_items(data.schema, [data.items[i] for i in sorted(train_ids)])
    test = RankedDataset.from_items(data.schema, [data.items[i] for i in sorted(test_ids)])
    return train, test
