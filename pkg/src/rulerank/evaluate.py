"""Experiment harness: repeated seeded splits, pairwise test metrics, and
rule-complexity reporting.

Each run makes a fresh 80/20 split, trains a comparator on pairs sampled
inside the training partition, and scores it on pairs sampled (with the same
law) inside the test partition, so no pair crosses the split.  Reported
complexity is the clause count and the predicate count (heads plus body
literal occurrences, exception calls included).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import EmptyInput
from .ingest import split
from .pairs import Comparator, SamplerConfig, encode_pair_rows, plot_pairs, sample_pairs, train
from .rules import predict
from .values import RankedDataset


class Metrics(NamedTuple):
    accuracy: float
    precision: float
    recall: float
    f1: float


def metrics(predictions: Sequence[bool], labels: Sequence[bool]) -> Metrics:
    """Standard binary metrics; precision/recall/F1 are 0 when undefined."""
    preds = np.asarray(predictions, dtype=bool)
    labs = np.asarray(labels, dtype=bool)
    if len(preds) != len(labs):
        raise ValueError("predictions and labels must have equal length")
    if len(preds) == 0:
        raise EmptyInput("no predictions to score")
    tp = int(np.count_nonzero(preds & labs))
    fp = int(np.count_nonzero(preds & ~labs))
    fn = int(np.count_nonzero(~preds & labs))
    tn = int(np.count_nonzero(~preds & ~labs))
    acc = (tp + tn) / len(preds)
    prec = tp / (tp + fp) if tp + fp else 0.0
    rec = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
    return Metrics(acc, prec, rec, f1)


@dataclass
class RunResult:
    seed: int
    metrics: Metrics
    n_rules: int
    n_predicates: int
    n_test_rows: int
    seconds: float
    comparator: Optional[Comparator] = None

    def to_dict(self, with_timing: bool = True) -> dict:
        d = {
            "seed": self.seed,
            "accuracy": self.metrics.accuracy,
            "precision": self.metrics.precision,
            "recall": self.metrics.recall,
            "f1": self.metrics.f1,
            "rules": self.n_rules,
            "predicates": self.n_predicates,
            "test_rows": self.n_test_rows,
        }
        if with_timing:
            d["seconds"] = self.seconds
        return d


@dataclass
class ExperimentReport:
    name: str
    runs: list[RunResult]
    seconds: float

    def mean(self, key) -> float:
        return float(np.mean([key(r) for r in self.runs]))

    def summary(self) -> Metrics:
        return Metrics(
            self.mean(lambda r: r.metrics.accuracy),
            self.mean(lambda r: r.metrics.precision),
            self.mean(lambda r: r.metrics.recall),
            self.mean(lambda r: r.metrics.f1),
        )

    def to_dict(self, with_timing: bool = True) -> dict:
        m = self.summary()
        d = {
            "dataset": self.name,
            "runs": [r.to_dict(with_timing) for r in self.runs],
            "mean": {
                "accuracy": m.accuracy,
                "precision": m.precision,
                "recall": m.recall,
                "f1": m.f1,
                "rules": self.mean(lambda r: r.n_rules),
                "predicates": self.mean(lambda r: r.n_predicates),
            },
        }
        if with_timing:
            d["seconds"] = self.seconds
        return d


def evaluate_comparator(cmp: Comparator, test_data: RankedDataset, cfg: SamplerConfig) -> tuple[Metrics, int]:
    """Pairwise metrics of a trained comparator on pairs sampled within
    test_data; returns (metrics, number of scored rows)."""
    pairs = sample_pairs(test_data, cfg)
    layout, rows = plot_pairs(test_data, pairs)
    table, labels = encode_pair_rows(layout, rows)
    preds = predict(cmp.ruleset, table)
    return metrics(preds, labels), len(rows)


def run_experiment(
    data: RankedDataset,
    runs: int = 5,
    seed: int = 0,
    ratio: float = 0.5,
    cfg: Optional[SamplerConfig] = None,
    train_fraction: float = 0.8,
    name: str = "dataset",
    keep_models: bool = False,
) -> ExperimentReport:
    """Averaged pairwise evaluation over seeded splits.

    Run r uses seed + 3r for the split, seed + 3r + 1 for training pairs,
    and seed + 3r + 2 for test pairs, so re-running with the same base seed
    reproduces every artifact exactly.  The sampler parameters are resolved
    once against the full dataset and the same resolved sampler is applied to
    both partitions, so test pairs follow the same gap law as training pairs.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    base_cfg = (cfg or SamplerConfig()).resolve(len(data.items))
    results: list[RunResult] = []
    t_all = time.perf_counter()
    for r in range(runs):
        t0 = time.perf_counter()
        train_data, test_data = split(data, train_fraction, seed + 3 * r)
        cmp = train(train_data, replace(base_cfg, seed=seed + 3 * r + 1), ratio=ratio)
        test_cfg = replace(base_cfg, seed=seed + 3 * r + 2)
        m, n_rows = evaluate_comparator(cmp, test_data, test_cfg)
        results.append(
            RunResult(
                seed=seed + 3 * r,
                metrics=m,
                n_rules=cmp.ruleset.clause_count(),
                n_predicates=cmp.ruleset.predicate_count(),
                n_test_rows=n_rows,
                seconds=time.perf_counter() - t0,
                comparator=cmp if keep_models else None,
            )
        )
    return ExperimentReport(name=name, runs=results, seconds=time.perf_counter() - t_all)


def render_report(report: ExperimentReport) -> str:
    header = f"{'run':>4} {'acc':>6} {'prec':>6} {'rec':>6} {'f1':>6} {'rules':>6} {'preds':>6} {'rows':>6} {'sec':>7}"
    lines = [f"dataset: {report.name}", header]
    for i, r in enumerate(report.runs, start=1):
        m = r.metrics
        lines.append(
            f"{i:>4} {m.accuracy:>6.3f} {m.precision:>6.3f} {m.recall:>6.3f} {m.f1:>6.3f} "
            f"{r.n_rules:>6d} {r.n_predicates:>6d} {r.n_test_rows:>6d} {r.seconds:>7.2f}"
        )
    m = report.summary()
    lines.append(
        f"{'mean':>4} {m.accuracy:>6.3f} {m.precision:>6.3f} {m.recall:>6.3f} {m.f1:>6.3f} "
        f"{report.mean(lambda r: r.n_rules):>6.1f} {report.mean(lambda r: r.n_predicates):>6.1f} "
        f"{report.mean(lambda r: r.n_test_rows):>6.0f} {report.seconds:>7.2f}"
    )
    return "\n".join(lines)
