"""Command-line interface.

Subcommands: train, rank, compare, eval, emit.  Exit code 0 on success and 2
on any input problem (missing file, bad column, malformed model, ...).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from typing import Optional

from .errors import RulerankError, SchemaMismatch
from .evaluate import render_report, run_experiment
from .ingest import load_csv
from .justify import annotate, explain, render_proof
from .literal_search import search_backend
from .pairs import Comparator, SamplerConfig, copeland_scores, train
from .program_text import emit
from .values import CATEGORICAL, NUMERIC, Item, Schema


def _sampler_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ratio", type=float, default=0.5, help="exception ratio (default 0.5)")
    p.add_argument("--sigma", type=float, default=None, help="rank-gap std dev (default n/20)")
    p.add_argument("--max-pairs", type=int, default=None, help="pair budget (default min(5000, all))")
    p.add_argument("--window", type=int, default=None, help="all-pairs sampling inside blocks of this width")
    p.add_argument("--seed", type=int, default=0)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rulerank", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="learn a comparator from a ranked CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--target", required=True, help="numeric column defining the rank order")
    _sampler_args(p)
    p.add_argument("--out", required=True, help="model JSON path")
    p.add_argument("--emit", dest="emit_path", default=None, help="also write the program text here")
    p.add_argument("--precision", choices=["3", "full"], default="3")

    p = sub.add_parser("rank", help="rank an item list with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--items", required=True, help="CSV of items (schema feature columns)")
    p.add_argument("--out", default=None, help="output CSV (default stdout)")

    p = sub.add_parser("compare", help="compare two rows of an item file")
    p.add_argument("--model", required=True)
    p.add_argument("--items", required=True)
    p.add_argument("--a-row", type=int, required=True, help="0-based row of item A")
    p.add_argument("--b-row", type=int, required=True, help="0-based row of item B")
    p.add_argument("--justify", action="store_true", help="print proof tree and annotated rules")

    p = sub.add_parser("eval", help="run the repeated split-train-score experiment")
    p.add_argument("--data", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--runs", type=int, default=5)
    _sampler_args(p)
    p.add_argument("--report", choices=["text", "json"], default="text")

    p = sub.add_parser("emit", help="print a stored model as program text")
    p.add_argument("--model", required=True)
    p.add_argument("--precision", choices=["3", "full"], default="3")
    p.add_argument("--out", default=None)
    return ap


def load_items(path: str, schema: Schema) -> list[Item]:
    """Items from a CSV whose header contains every schema feature.

    Cells in numeric features that do not parse as finite numbers are treated
    as missing; the target column, if present, is carried along.
    """
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = [h.strip() for h in next(reader, [])]
        rows = list(reader)
    cols = {}
    for name, _ in schema.features:
        if name not in header:
            raise SchemaMismatch(f"{path}: missing feature column {name!r}")
        cols[name] = header.index(name)
    tgt = header.index(schema.target) if schema.target in header else None
    items = []
    for rid, row in enumerate(rows):
        vals = []
        for name, kind in schema.features:
            cell = row[cols[name]].strip()
            if cell == "":
                vals.append(None)
            elif kind == NUMERIC:
                try:
                    x = float(cell)
                except ValueError:
                    x = float("nan")
                vals.append(x if math.isfinite(x) else None)
            else:
                vals.append(cell)
        target = 0.0
        if tgt is not None and row[tgt].strip():
            try:
                target = float(row[tgt])
            except ValueError:
                target = 0.0
        items.append(Item(id=rid, values=tuple(vals), target=target))
    return items


def _write(text: str, path: Optional[str]) -> None:
    if path is None:
        print(text)
    else:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text if text.endswith("\n") or not text else text + "\n")


def _cmd_train(args) -> int:
    data = load_csv(args.data, args.target)
    cfg = SamplerConfig(sigma=args.sigma, max_pairs=args.max_pairs, seed=args.seed, window=args.window)
    cmp = train(data, cfg, ratio=args.ratio)
    cmp.save(args.out)
    rs = cmp.ruleset
    print(
        f"trained {rs.clause_count()} clauses / {rs.predicate_count()} predicates "
        f"({search_backend()} search) -> {args.out}"
    )
    if args.emit_path:
        _write(emit(rs, args.precision), args.emit_path)
    return 0


def _cmd_rank(args) -> int:
    cmp = Comparator.load(args.model)
    items = load_items(args.items, cmp.schema)
    scores = copeland_scores(cmp, items)
    order = sorted(range(len(items)), key=lambda i: (-scores[i], i))
    lines = ["rank,id,copeland_score"]
    lines += [f"{r + 1},{items[i].id},{scores[i]}" for r, i in enumerate(order)]
    _write("\n".join(lines), args.out)
    return 0


def _cmd_compare(args) -> int:
    cmp = Comparator.load(args.model)
    items = load_items(args.items, cmp.schema)
    try:
        a, b = items[args.a_row], items[args.b_row]
    except IndexError:
        raise RulerankError(f"row out of range (file has {len(items)} items)")
    verdict = cmp.compare(a, b)
    print(f"better(row {args.a_row}, row {args.b_row}): {str(verdict).lower()}")
    if args.justify:
        print()
        print(render_proof(explain(cmp, a, b)))
        print()
        print(annotate(cmp, a, b))
    return 0


def _cmd_eval(args) -> int:
    data = load_csv(args.data, args.target)
    cfg = SamplerConfig(sigma=args.sigma, max_pairs=args.max_pairs, window=args.window)
    report = run_experiment(
        data, runs=args.runs, seed=args.seed, ratio=args.ratio, cfg=cfg, name=args.data
    )
    if args.report == "json":
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(render_report(report))
    return 0


def _cmd_emit(args) -> int:
    cmp = Comparator.load(args.model)
    _write(emit(cmp.ruleset, args.precision), args.out)
    return 0


_COMMANDS = {
    "train": _cmd_train,
    "rank": _cmd_rank,
    "compare": _cmd_compare,
    "eval": _cmd_eval,
    "emit": _cmd_emit,
}


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (RulerankError, OSError, ValueError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
