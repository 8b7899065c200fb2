"""Core value semantics and dataset containers.

A cell value is one of three plain Python types:

* ``float`` -- a finite numeric value,
* ``str``   -- a categorical symbol, compared by exact text identity,
* ``None``  -- a missing cell.

Missing behaves like a categorical value of its own: it equals itself and
nothing else, and every numeric comparison against it is false.  Comparing a
numeric value against a categorical one (in either direction) is likewise
always false.  These rules keep every literal test total without imputation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

Value = Union[float, str, None]

NUMERIC = "numeric"
CATEGORICAL = "categorical"


def _is_number(v: object) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def as_value(v: object) -> Value:
    """Normalize a raw cell into a Value (ints become floats)."""
    if v is None or isinstance(v, str):
        return v
    if _is_number(v):
        f = float(v)
        if not math.isfinite(f):
            raise ValueError(f"numeric cell must be finite, got {v!r}")
        return f
    raise TypeError(f"unsupported cell type: {type(v).__name__}")


def value_equal(a: Value, b: Value) -> bool:
    """True iff both values have the same kind and identical payload."""
    if _is_number(a) and _is_number(b):
        return float(a) == float(b)
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    return a is None and b is None


def num_leq(a: Value, threshold: float) -> bool:
    """a <= threshold for numeric a; false for categorical or missing a."""
    return _is_number(a) and float(a) <= threshold


def num_gt(a: Value, threshold: float) -> bool:
    """a > threshold for numeric a; false for categorical or missing a."""
    return _is_number(a) and float(a) > threshold


@dataclass(frozen=True)
class Schema:
    """Feature layout of a dataset: ordered (name, kind) pairs plus the
    name of the numeric target column the rank order derives from."""

    features: tuple[tuple[str, str], ...]
    target: str

    def __post_init__(self) -> None:
        names = [n for n, _ in self.features]
        if len(set(names)) != len(names):
            raise ValueError("feature names must be unique")
        if self.target in names:
            raise ValueError("target must not be a learnable feature")
        for name, kind in self.features:
            if kind not in (NUMERIC, CATEGORICAL):
                raise ValueError(f"bad kind {kind!r} for feature {name!r}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.features)

    def index_of(self, name: str) -> int:
        for i, (n, _) in enumerate(self.features):
            if n == name:
                return i
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"features": [[n, k] for n, k in self.features], "target": self.target}

    @classmethod
    def from_dict(cls, d: dict) -> "Schema":
        return cls(tuple((n, k) for n, k in d["features"]), d["target"])


@dataclass(frozen=True)
class Item:
    """One feature row.  ``target`` is used only to derive the rank order."""

    id: object
    values: tuple[Value, ...]
    target: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(as_value(v) for v in self.values))
        object.__setattr__(self, "target", float(self.target))


@dataclass(frozen=True)
class RankedDataset:
    """Items sorted by target descending (best first).  Ties keep ingest order."""

    schema: Schema
    items: tuple[Item, ...]

    def __post_init__(self) -> None:
        n = len(self.schema.features)
        for it in self.items:
            if len(it.values) != n:
                raise ValueError(f"item {it.id!r} has {len(it.values)} values, schema has {n}")
        for a, b in zip(self.items, self.items[1:]):
            if a.target < b.target:
                raise ValueError("items must be sorted by target descending")

    @classmethod
    def from_items(cls, schema: Schema, items: Iterable[Item]) -> "RankedDataset":
        ordered = sorted(items, key=lambda it: -it.target)  # stable: ingest order kept on ties
        return cls(schema, tuple(ordered))

    def __len__(self) -> int:
        return len(self.items)

    def subset(self, indices: Sequence[int]) -> "RankedDataset":
        return RankedDataset.from_items(self.schema, [self.items[i] for i in indices])
