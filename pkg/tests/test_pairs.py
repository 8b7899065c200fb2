import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import rulerank as rr
from helpers import kendall_tau, random_ranked_dataset, sign_dataset
from rulerank.errors import AllTied, NotEnoughItems, SchemaMismatch
from rulerank.ingest import split
from rulerank.pairs import (
    Comparator,
    SamplerConfig,
    copeland_scores,
    encode_pair_rows,
    plot_pairs,
    sample_pairs,
)
from rulerank.rules import OP_GT, Literal, Rule, RuleSet, predict
from rulerank.table import pair_layout


# ---------------------------------------------------------------------------
# sampling


def test_two_items_single_pair():
    data = sign_dataset(2)
    pairs = sample_pairs(data, SamplerConfig(max_pairs=10, seed=1))
    assert pairs == [(0, 1)]


def test_sampler_deterministic():
    data = sign_dataset(200)
    cfg = SamplerConfig(sigma=4.0, max_pairs=300, seed=42)
    assert sample_pairs(data, cfg) == sample_pairs(data, cfg)


def test_sampler_respects_budget_and_order():
    data = sign_dataset(50)
    pairs = sample_pairs(data, SamplerConfig(max_pairs=40, seed=3))
    assert len(pairs) <= 40
    assert all(i < j for i, j in pairs)
    assert len(set(pairs)) == len(pairs)


def test_sampler_gap_concentration():
    # half-normal gaps: with sigma=5 nearly all mass sits at gap <= 10
    data = sign_dataset(1000)
    pairs = sample_pairs(data, SamplerConfig(sigma=5.0, max_pairs=2000, seed=0))
    gaps = [j - i for i, j in pairs]
    assert len(pairs) == 2000
    assert sum(g <= 10 for g in gaps) / len(gaps) >= 0.80


def test_sampler_skips_tied_targets():
    schema = rr.Schema((("a", rr.NUMERIC),), target="y")
    items = [rr.Item(i, (float(i),), float(i // 2)) for i in range(20)]
    data = rr.RankedDataset.from_items(schema, items)
    pairs = sample_pairs(data, SamplerConfig(max_pairs=500, seed=5))
    for i, j in pairs:
        assert data.items[i].target != data.items[j].target


def test_sampler_errors():
    with pytest.raises(NotEnoughItems):
        sample_pairs(sign_dataset(1), SamplerConfig(seed=0))
    schema = rr.Schema((("a", rr.NUMERIC),), target="y")
    tied = rr.RankedDataset.from_items(
        schema, [rr.Item(i, (float(i),), 1.0) for i in range(5)]
    )
    with pytest.raises(AllTied):
        sample_pairs(tied, SamplerConfig(seed=0))


def test_window_mode():
    data = sign_dataset(100)
    pairs = sample_pairs(data, SamplerConfig(max_pairs=60, seed=2, window=5))
    assert 0 < len(pairs) <= 60
    assert all(j - i < 5 for i, j in pairs)


def test_config_validation():
    with pytest.raises(ValueError):
        SamplerConfig(sigma=0.0).resolve(10)
    with pytest.raises(ValueError):
        SamplerConfig(max_pairs=0).resolve(10)


# ---------------------------------------------------------------------------
# plotting


def test_plot_pairs_example():
    schema = rr.Schema((("a", rr.NUMERIC), ("c", rr.CATEGORICAL)), target="y")
    items = [rr.Item(0, (4.0, "u"), 2.0), rr.Item(1, (1.5, "v"), 1.0)]
    data = rr.RankedDataset.from_items(schema, items)
    layout, rows = plot_pairs(data, [(0, 1)])
    assert [c.key for c in layout.columns] == ["a", "c@A", "c@B"]
    assert layout.cat_pairs == ((1, 2),)
    assert rows[0].values == (2.5, "u", "v") and rows[0].label is True
    assert rows[1].values == (-2.5, "v", "u") and rows[1].label is False


def test_plot_missing_propagates():
    schema = rr.Schema((("a", rr.NUMERIC),), target="y")
    items = [rr.Item(0, (None,), 2.0), rr.Item(1, (1.5,), 1.0)]
    data = rr.RankedDataset.from_items(schema, items)
    _, rows = plot_pairs(data, [(0, 1)])
    assert rows[0].values == (None,) and rows[1].values == (None,)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_symmetric_plotting_property(seed):
    rng = random.Random(seed)
    data = random_ranked_dataset(rng, n_items=rng.randint(3, 12))
    n = len(data.items)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)][:10]
    layout, rows = plot_pairs(data, pairs)
    assert len(rows) == 2 * len(pairs)
    twin_of = {i: j for i, j in layout.cat_pairs} | {j: i for i, j in layout.cat_pairs}
    for fwd, rev in zip(rows[0::2], rows[1::2]):
        assert fwd.label and not rev.label
        assert (fwd.a_id, fwd.b_id) == (rev.b_id, rev.a_id)
        for ci, col in enumerate(layout.columns):
            if col.kind == rr.NUMERIC:
                a, b = fwd.values[ci], rev.values[ci]
                assert (a is None and b is None) or a == -b
            else:
                assert fwd.values[ci] == rev.values[twin_of[ci]]


# ---------------------------------------------------------------------------
# training / comparing / ranking


def test_sign_comparator_perfect():
    data = sign_dataset(100)
    train_d, test_d = split(data, 0.8, seed=4)
    cmp = rr.train(train_d, SamplerConfig(seed=4))
    test_pairs = sample_pairs(test_d, SamplerConfig(seed=5))
    layout, rows = plot_pairs(test_d, test_pairs)
    table, labels = encode_pair_rows(layout, rows)
    assert (predict(cmp.ruleset, table) == labels).all()
    # agrees with the sign oracle item-by-item
    rng = random.Random(0)
    for _ in range(50):
        a, b = rng.sample(test_d.items, 2)
        assert cmp.compare(a, b) == (a.values[0] > b.values[0])


def test_compare_schema_mismatch():
    cmp = rr.train(sign_dataset(30), SamplerConfig(seed=0))
    bad = rr.Item("x", (1.0, 2.0), 0.0)
    with pytest.raises(SchemaMismatch):
        cmp.compare(bad, bad)


def test_rank_list_single_item():
    cmp = rr.train(sign_dataset(30), SamplerConfig(seed=0))
    item = sign_dataset(30).items[5]
    assert rr.rank_list(cmp, [item]) == [item]


def test_rank_list_recovers_target_order():
    data = sign_dataset(60)
    cmp = rr.train(data, SamplerConfig(seed=6))
    items = list(data.items[10:30])
    shuffled = items[:]
    random.Random(3).shuffle(shuffled)
    ranked = rr.rank_list(cmp, shuffled)
    assert kendall_tau(ranked, items) == 1.0


def test_rank_list_permutation_property():
    data = sign_dataset(40)
    cmp = rr.train(data, SamplerConfig(seed=1))
    items = list(data.items)[::3]
    ranked = rr.rank_list(cmp, items)
    assert sorted(it.id for it in ranked) == sorted(it.id for it in items)


def test_cyclic_comparator_keeps_input_order():
    # hand-built 3-cycle over a categorical twin: every item wins once and
    # loses once, so all Copeland scores are 0 and input order is preserved
    schema = rr.Schema((("c", rr.CATEGORICAL),), target="y")
    layout = pair_layout(schema)
    rules = [
        Rule("better", [Literal(0, "eq", symbol="r"), Literal(1, "eq", symbol="s")], []),
        Rule("better", [Literal(0, "eq", symbol="s"), Literal(1, "eq", symbol="p")], []),
        Rule("better", [Literal(0, "eq", symbol="p"), Literal(1, "eq", symbol="r")], []),
    ]
    cmp = Comparator(schema=schema, ruleset=RuleSet(layout=layout, rules=rules))
    items = [rr.Item(s, (s,), 0.0) for s in ("p", "r", "s")]
    assert list(copeland_scores(cmp, items)) == [0, 0, 0]
    for perm_seed in range(4):
        shuffled = items[:]
        random.Random(perm_seed).shuffle(shuffled)
        assert rr.rank_list(cmp, shuffled) == shuffled


def test_compare_both_directions_can_abstain():
    schema = rr.Schema((("a", rr.NUMERIC),), target="y")
    layout = pair_layout(schema)
    rs = RuleSet(layout=layout, rules=[Rule("better", [Literal(0, OP_GT, threshold=100.0)], [])])
    cmp = Comparator(schema=schema, ruleset=rs)
    a, b = rr.Item(0, (1.0,), 0.0), rr.Item(1, (2.0,), 0.0)
    assert not cmp.compare(a, b) and not cmp.compare(b, a)


def test_train_propagates_all_tied():
    schema = rr.Schema((("a", rr.NUMERIC),), target="y")
    tied = rr.RankedDataset.from_items(
        schema, [rr.Item(i, (float(i),), 1.0) for i in range(10)]
    )
    with pytest.raises(AllTied):
        rr.train(tied, SamplerConfig(seed=0))


def test_comparator_save_load_roundtrip(tmp_path):
    cmp = rr.train(sign_dataset(50), SamplerConfig(seed=2))
    path = tmp_path / "model.json"
    cmp.save(path)
    loaded = Comparator.load(path)
    assert loaded.schema == cmp.schema
    assert loaded.ruleset.rules == cmp.ruleset.rules
    assert loaded.ruleset.ab_rules == cmp.ruleset.ab_rules
    data = sign_dataset(50)
    for a, b in [(3, 40), (41, 2), (10, 10)]:
        ia, ib = data.items[a], data.items[b]
        assert loaded.compare(ia, ib) == cmp.compare(ia, ib)


def test_model_bytes_deterministic(tmp_path):
    p1, p2 = tmp_path / "m1.json", tmp_path / "m2.json"
    rr.train(sign_dataset(80), SamplerConfig(seed=9)).save(p1)
    rr.train(sign_dataset(80), SamplerConfig(seed=9)).save(p2)
    assert p1.read_bytes() == p2.read_bytes()
