"""Pairwise ranking framework: rank-gap sampling, pair plotting, comparator
training, and Copeland-score list ranking.

Training pairs are drawn by rank proximity: the gap between the two anchors
follows a half-normal law, so closely ranked items dominate the training set.
Each sampled ordered pair (winner, loser) is plotted twice -- once as a
positive row and once with the sides swapped as the symmetric negative --
giving the learner both labels of the better/2 relation.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .errors import AllTied, NotEnoughItems, SchemaMismatch
from .induction import learn_ruleset
from .rules import RuleSet, predict, ruleset_from_dict, ruleset_to_dict
from .table import EncodedTable, encode_rows, pair_layout
from .values import CATEGORICAL, NUMERIC, Item, RankedDataset, Schema, Value

_DRAW_BATCH = 2048


@dataclass(frozen=True)
class SamplerConfig:
    """Pair-sampling parameters.

    sigma is the standard deviation of the rank-gap distribution in rank
    positions; unset fields are derived from the dataset size at use:
    sigma = max(1, n/20) and max_pairs = min(5000, n*(n-1)/2).  window, when
    set, switches to all-pairs sampling inside random contiguous rank blocks
    of that width.
    """

    sigma: Optional[float] = None
    max_pairs: Optional[int] = None
    seed: int = 0
    window: Optional[int] = None

    def resolve(self, n_items: int) -> "SamplerConfig":
        sigma = self.sigma if self.sigma is not None else max(1.0, n_items / 20.0)
        max_pairs = (
            self.max_pairs
            if self.max_pairs is not None
            else min(5000, n_items * (n_items - 1) // 2)
        )
        if sigma <= 0:
            raise ValueError("sigma must be > 0")
        if max_pairs < 1:
            raise ValueError("max_pairs must be >= 1")
        return replace(self, sigma=sigma, max_pairs=max_pairs)

    def to_dict(self) -> dict:
        return {
            "sigma": self.sigma,
            "max_pairs": self.max_pairs,
            "seed": self.seed,
            "window": self.window,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SamplerConfig":
        return cls(d.get("sigma"), d.get("max_pairs"), d.get("seed", 0), d.get("window"))


def sample_pairs(data: RankedDataset, cfg: SamplerConfig) -> list[tuple[int, int]]:
    """Ordered position pairs (i, j) with i outranking j, deterministic per seed.

    Pairs whose items have equal target scores carry no preference and are
    discarded; duplicates are removed.
    """
    n = len(data.items)
    if n < 2:
        raise NotEnoughItems("need at least 2 items to sample pairs")
    targets = np.array([it.target for it in data.items])
    if targets[0] == targets[-1]:
        raise AllTied("every item has the same target score")
    cfg = cfg.resolve(n)
    rng = np.random.default_rng(cfg.seed)
    if cfg.window is not None:
        return _sample_window(targets, cfg, rng)

    seen: set[tuple[int, int]] = set()
    out: list[tuple[int, int]] = []
    budget = max(20_000, 60 * cfg.max_pairs)
    drawn = 0
    while len(out) < cfg.max_pairs and drawn < budget:
        gaps = np.maximum(1, np.abs(np.rint(rng.normal(0.0, cfg.sigma, _DRAW_BATCH)))).astype(int)
        anchors = rng.random(_DRAW_BATCH)
        drawn += _DRAW_BATCH
        for g, u in zip(gaps.tolist(), anchors.tolist()):
            if g > n - 1:
                continue
            i = int(u * (n - g))
            j = i + g
            if targets[i] == targets[j]:
                continue
            pair = (i, j)
            if pair in seen:
                continue
            seen.add(pair)
            out.append(pair)
            if len(out) == cfg.max_pairs:
                break
    return out


def _sample_window(targets: np.ndarray, cfg: SamplerConfig, rng: np.random.Generator) -> list[tuple[int, int]]:
    n = len(targets)
    w = min(cfg.window, n)
    seen: set[tuple[int, int]] = set()
    out: list[tuple[int, int]] = []
    for _ in range(max(200, cfg.max_pairs)):
        if len(out) >= cfg.max_pairs:
            break
        start = int(rng.integers(0, n - w + 1))
        for i in range(start, start + w):
            for j in range(i + 1, start + w):
                if targets[i] == targets[j] or (i, j) in seen:
                    continue
                seen.add((i, j))
                out.append((i, j))
                if len(out) == cfg.max_pairs:
                    break
            if len(out) == cfg.max_pairs:
                break
    return out


@dataclass(frozen=True)
class PairRow:
    """One plotted comparison row: numeric differences then A/B categorical
    twins, labeled true iff item A outranks item B."""

    a_id: object
    b_id: object
    values: tuple[Value, ...]
    label: bool


def plot_row(schema: Schema, a: Item, b: Item) -> tuple[Value, ...]:
    """Feature row for the ordered pair (A=a, B=b) in pair-layout column order."""
    out: list[Value] = []
    for k, (_, kind) in enumerate(schema.features):
        if kind == NUMERIC:
            va, vb = a.values[k], b.values[k]
            out.append(va - vb if isinstance(va, float) and isinstance(vb, float) else None)
    for k, (_, kind) in enumerate(schema.features):
        if kind == CATEGORICAL:
            out.append(a.values[k])
            out.append(b.values[k])
    return tuple(out)


def plot_pairs(data: RankedDataset, pairs: Sequence[tuple[int, int]]):
    """Expand sampled pairs into labeled rows: each ordered pair (i, j) with i
    outranking j yields a positive row and the swapped negative row.

    Returns (layout, rows).
    """
    layout = pair_layout(data.schema)
    rows: list[PairRow] = []
    for i, j in pairs:
        a, b = data.items[i], data.items[j]
        rows.append(PairRow(a.id, b.id, plot_row(data.schema, a, b), True))
        rows.append(PairRow(b.id, a.id, plot_row(data.schema, b, a), False))
    return layout, rows


def encode_pair_rows(layout, rows: Sequence[PairRow]) -> tuple[EncodedTable, np.ndarray]:
    table = encode_rows(layout, [r.values for r in rows])
    labels = np.array([r.label for r in rows], dtype=bool)
    return table, labels


@dataclass
class Comparator:
    """A trained better/2 predicate bundled with its source schema."""

    schema: Schema
    ruleset: RuleSet
    sampler: SamplerConfig = field(default_factory=SamplerConfig)

    def _check(self, item: Item) -> None:
        if len(item.values) != len(self.schema.features):
            raise SchemaMismatch(
                f"item {item.id!r} has {len(item.values)} values, schema expects "
                f"{len(self.schema.features)}"
            )

    def compare(self, a: Item, b: Item) -> bool:
        return bool(self.compare_many([(a, b)])[0])

    def compare_many(self, ab_pairs: Sequence[tuple[Item, Item]]) -> np.ndarray:
        for a, b in ab_pairs:
            self._check(a)
            self._check(b)
        rows = [plot_row(self.schema, a, b) for a, b in ab_pairs]
        table = encode_rows(self.ruleset.layout, rows)
        return predict(self.ruleset, table)

    def to_dict(self) -> dict:
        schema_doc = self.schema.to_dict()
        return {
            "format": "rulerank-comparator",
            "version": 1,
            "schema": schema_doc,
            "schema_fingerprint": hashlib.sha256(
                json.dumps(schema_doc, sort_keys=True).encode()
            ).hexdigest(),
            "sampler": self.sampler.to_dict(),
            "ruleset": ruleset_to_dict(self.ruleset),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Comparator":
        if d.get("format") != "rulerank-comparator":
            raise ValueError("not a comparator document")
        return cls(
            schema=Schema.from_dict(d["schema"]),
            ruleset=ruleset_from_dict(d["ruleset"]),
            sampler=SamplerConfig.from_dict(d.get("sampler", {})),
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2)
            f.write("\n")

    @classmethod
    def load(cls, path) -> "Comparator":
        with open(path, encoding="utf-8") as f:
            return cls.from_dict(json.load(f))


def compare(cmp: Comparator, a: Item, b: Item) -> bool:
    """True iff the learned program implies better(a, b)."""
    return cmp.compare(a, b)


def train(
    data: RankedDataset,
    cfg: Optional[SamplerConfig] = None,
    ratio: float = 0.5,
    max_depth: int = 10,
    min_coverage: float = 0.01,
    trace: Optional[list] = None,
) -> Comparator:
    """Sample pairs, plot them, and learn the better/2 rule set."""
    cfg = (cfg or SamplerConfig()).resolve(len(data.items))
    pairs = sample_pairs(data, cfg)
    layout, rows = plot_pairs(data, pairs)
    table, labels = encode_pair_rows(layout, rows)
    pos = np.flatnonzero(labels)
    neg = np.flatnonzero(~labels)
    rs = learn_ruleset(
        table, pos, neg, ratio=ratio, max_depth=max_depth, min_coverage=min_coverage, trace=trace
    )
    return Comparator(schema=data.schema, ruleset=rs, sampler=cfg)


def copeland_scores(cmp: Comparator, items: Sequence[Item], batch_rows: int = 100_000) -> np.ndarray:
    """Wins minus losses over all ordered comparisons.

    Comparisons run in batches so the n*(n-1) plotted rows never materialize
    at once for large item lists.
    """
    n = len(items)
    scores = np.zeros(n, dtype=np.int64)
    if n < 2:
        return scores
    for it in items:
        cmp._check(it)
    pending: list[tuple[int, int]] = []

    def flush() -> None:
        rows = [plot_row(cmp.schema, items[x], items[y]) for x, y in pending]
        table = encode_rows(cmp.ruleset.layout, rows)
        for (x, y), win in zip(pending, predict(cmp.ruleset, table)):
            if win:
                scores[x] += 1
                scores[y] -= 1
        pending.clear()

    for x in range(n):
        for y in range(n):
            if x != y:
                pending.append((x, y))
                if len(pending) >= batch_rows:
                    flush()
    if pending:
        flush()
    return scores


def rank_list(cmp: Comparator, items: Sequence[Item]) -> list[Item]:
    """Total order by Copeland score, stable in input order on ties."""
    if len(items) == 0:
        raise NotEnoughItems("cannot rank an empty list")
    scores = copeland_scores(cmp, items)
    order = np.argsort(-scores, kind="stable")
    return [items[i] for i in order]
