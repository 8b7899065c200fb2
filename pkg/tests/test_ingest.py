import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import rulerank as rr
from rulerank.errors import (
    EmptyColumn,
    EmptyDataset,
    MissingTarget,
    NonNumericTarget,
    RaggedRow,
)


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_load_mixed_schema(tmp_path):
    p = write(tmp_path, "a,b,y\n1.5,red,3\n2.5,blue,1\n")
    data = rr.load_csv(p, "y")
    assert data.schema.features == (("a", rr.NUMERIC), ("b", rr.CATEGORICAL))
    assert [it.target for it in data.items] == [3.0, 1.0]


def test_blank_numeric_cell_is_missing(tmp_path):
    p = write(tmp_path, "a,y\n,1\n2.5,2\n")
    data = rr.load_csv(p, "y")
    assert data.schema.features == ((("a"), rr.NUMERIC),)
    vals = {it.id: it.values[0] for it in data.items}
    assert vals[0] is None and vals[1] == 2.5


def test_numeric_looking_text_column_stays_categorical(tmp_path):
    p = write(tmp_path, "a,y\n1,1\nx,2\n")
    data = rr.load_csv(p, "y")
    assert data.schema.features[0][1] == rr.CATEGORICAL
    assert {it.values[0] for it in data.items} == {"1", "x"}


def test_non_finite_cells_make_column_categorical(tmp_path):
    p = write(tmp_path, "a,y\ninf,1\n2.0,2\n")
    data = rr.load_csv(p, "y")
    assert data.schema.features[0][1] == rr.CATEGORICAL


def test_quoted_fields(tmp_path):
    p = write(tmp_path, 'a,y\n"red, big",1\nsmall,2\n')
    data = rr.load_csv(p, "y")
    assert {it.values[0] for it in data.items} == {"red, big", "small"}


def test_errors(tmp_path):
    with pytest.raises(MissingTarget):
        rr.load_csv(write(tmp_path, "a,b\n1,2\n"), "y")
    with pytest.raises(NonNumericTarget):
        rr.load_csv(write(tmp_path, "a,y\n1,x\n"), "y")
    with pytest.raises(RaggedRow):
        rr.load_csv(write(tmp_path, "a,y\n1\n"), "y")
    with pytest.raises(EmptyDataset):
        rr.load_csv(write(tmp_path, "a,y\n"), "y")
    with pytest.raises(EmptyColumn):
        rr.load_csv(write(tmp_path, "a,y\n,1\n,2\n"), "y")


def test_schema_inference_idempotent(tmp_path):
    p = write(tmp_path, "a,b,y\n1.5,red,3\n2.5,blue,1\n,green,2\n")
    assert rr.load_csv(p, "y").schema == rr.load_csv(p, "y").schema


def _make(n):
    schema = rr.Schema((("a", rr.NUMERIC),), target="y")
    return rr.RankedDataset.from_items(
        schema, [rr.Item(i, (float(i),), float(i % 7)) for i in range(n)]
    )


def test_split_sizes_506():
    train, test = rr.split(_make(506), 0.8, seed=1)
    assert len(train.items) == 405 and len(test.items) == 101


def test_split_deterministic():
    data = _make(50)
    a = rr.split(data, 0.8, seed=9)
    b = rr.split(data, 0.8, seed=9)
    assert [i.id for i in a[0].items] == [i.id for i in b[0].items]
    assert [i.id for i in a[1].items] == [i.id for i in b[1].items]


@settings(max_examples=30)
@given(
    n=st.integers(min_value=2, max_value=80),
    frac=st.floats(min_value=0.05, max_value=0.95),
    seed=st.integers(min_value=0, max_value=2**31 - 1),
)
def test_split_is_partition(n, frac, seed):
    data = _make(n)
    train, test = rr.split(data, frac, seed)
    train_ids = {i.id for i in train.items}
    test_ids = {i.id for i in test.items}
    assert len(train.items) == int(round(frac * n))
    assert not (train_ids & test_ids)
    assert train_ids | test_ids == {i.id for i in data.items}


def test_split_partitions_resorted():
    train, test = rr.split(_make(30), 0.5, seed=3)
    for part in (train, test):
        targets = [i.target for i in part.items]
        assert targets == sorted(targets, reverse=True)
