import numpy as np
import pytest

import rulerank as rr
from helpers import example_house_program, sign_dataset
from rulerank.errors import EmptyInput
from rulerank.evaluate import Metrics, metrics, render_report, run_experiment


def test_metrics_all_correct():
    assert metrics([True, False, True], [True, False, True]) == Metrics(1.0, 1.0, 1.0, 1.0)


def test_metrics_degenerate_denominators():
    m = metrics([False] * 4, [True, True, False, False])
    assert m == Metrics(0.5, 0.0, 0.0, 0.0)


def test_metrics_hand_case():
    # tp=3 fp=1 fn=1 tn=5
    preds = [True] * 3 + [True] + [False] + [False] * 5
    labels = [True] * 3 + [False] + [True] + [False] * 5
    m = metrics(preds, labels)
    assert m.accuracy == pytest.approx(0.8)
    assert m.precision == pytest.approx(0.75)
    assert m.recall == pytest.approx(0.75)
    assert m.f1 == pytest.approx(0.75)


def test_metrics_empty_input():
    with pytest.raises(EmptyInput):
        metrics([], [])


def test_metrics_length_mismatch():
    with pytest.raises(ValueError):
        metrics([True], [True, False])


def test_predicate_count_on_house_program():
    rs = example_house_program().ruleset
    assert rs.clause_count() == 7
    # heads (7) + body literals (12) + exception calls (5)
    assert rs.predicate_count() == 24


def test_run_experiment_deterministic():
    data = sign_dataset(60)
    a = run_experiment(data, runs=2, seed=5, name="sign")
    b = run_experiment(data, runs=2, seed=5, name="sign")
    assert a.to_dict(with_timing=False) == b.to_dict(with_timing=False)


def test_run_experiment_perfect_on_sign_data():
    report = run_experiment(sign_dataset(100), runs=2, seed=1, name="sign")
    m = report.summary()
    assert m.accuracy == 1.0 and m.f1 == 1.0


def test_render_report_shape():
    report = run_experiment(sign_dataset(50), runs=2, seed=3, name="sign")
    text = render_report(report)
    lines = text.splitlines()
    assert lines[0] == "dataset: sign"
    assert len(lines) == 2 + 2 + 1  # header rows + runs + mean
    assert lines[-1].startswith("mean")


def test_run_experiment_validates_runs():
    with pytest.raises(ValueError):
        run_experiment(sign_dataset(20), runs=0)
