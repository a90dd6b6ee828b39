# -*- coding: utf-8 -*-

import numpy as np
import pytest

from cardsearch.tools.metrics import (
    accuracy,
    auc,
    auc_pair_counts,
    auc_report,
    per_turn_auc,
    per_turn_table,
    turn_bucket,
    wilson_interval,
)
from cardsearch.util import DegenerateLabels


def brute_force_auc(scores, labels):
    pos = [s for s, y in zip(scores, labels) if y]
    neg = [s for s, y in zip(scores, labels) if not y]
    wins = 0.0
    for p in pos:
        for n in neg:
            wins += 1.0 if p > n else 0.5 if p == n else 0.0
    return wins / (len(pos) * len(neg))


def test_auc_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(200):
        n = int(rng.integers(2, 40))
        # few distinct values, many ties
        scores = rng.integers(0, 5, n) / 4.0
        labels = rng.integers(0, 2, n)
        labels[0], labels[1] = 0, 1
        assert abs(auc(scores, labels) - brute_force_auc(scores, labels)) < 1e-12


def test_auc_examples():
    assert auc([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0
    assert auc([0.9, 0.8, 0.2, 0.1], [0, 0, 1, 1]) == 0.0
    assert auc([0.5] * 4, [1, 0, 1, 0]) == 0.5
    assert auc_pair_counts([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]) == (3.0, 2, 2)


def test_auc_monotone_invariance():
    rng = np.random.default_rng(1)
    scores = rng.normal(0.0, 1.0, 100)
    labels = rng.integers(0, 2, 100)
    assert auc(scores, labels) == auc(np.exp(scores), labels)
    assert abs(auc(-scores, labels) - (1.0 - auc(scores, labels))) < 1e-12


def test_auc_degenerate():
    with pytest.raises(DegenerateLabels):
        auc([0.1, 0.2], [1, 1])
    with pytest.raises(DegenerateLabels):
        auc([0.1, 0.2], [0, 0])
    with pytest.raises(ValueError):
        auc([0.1, 0.2], [0, 2])
    with pytest.raises(ValueError):
        auc([0.1, 0.2, 0.3], [0, 1])


def test_turn_bucket():
    assert turn_bucket(1) == "1"
    assert turn_bucket(30) == "30"
    assert turn_bucket(31) == "30+"
    assert turn_bucket(150) == "30+"


def test_per_turn_auc():
    scores = [0.9, 0.1, 0.8, 0.7, 0.2, 0.6, 0.4, 0.3]
    labels = [1, 0, 1, 1, 0, 1, 0, 1]
    turns = [1, 1, 2, 2, 3, 31, 45, 60]
    rows = per_turn_auc(scores, labels, turns)
    # turns 2 and 3 hold a single class
    assert [r.bucket for r in rows] == ["1", "30+"]
    assert rows[0].auc == 1.0 and rows[0].n == 2
    assert rows[1].n == 3
    assert rows[1].auc == 0.5
    table = per_turn_table(rows)
    assert table["turn"] == ["1", "30+"]
    assert table["n"] == [2, 3]


def test_auc_report():
    rng = np.random.default_rng(2)
    labels = rng.integers(0, 2, 500)
    scores = labels + rng.normal(0.0, 1.0, 500)
    turns = rng.integers(1, 60, 500)
    report = auc_report(scores, labels, turns)
    assert 0.5 < report.overall_auc < 1.0
    assert report.n_pos + report.n_neg == 500
    assert report.n_pos == int(labels.sum())
    assert sum(r.n for r in report.per_turn) <= 500
    assert report.per_turn[-1].bucket == "30+"


def test_accuracy():
    assert accuracy([0.9, 0.2, 0.6], [1, 0, 0]) == 2 / 3.0
    assert accuracy([0.9, 0.2], [1, 0]) == 1.0
    assert accuracy([0.5], [1]) == 0.0


def test_wilson_interval():
    low, high = wilson_interval(50, 100)
    assert abs(low - 0.4038) < 1e-4
    assert abs(high - 0.5962) < 1e-4
    assert wilson_interval(0, 0) == (0.0, 1.0)
    low, high = wilson_interval(10, 10)
    assert 0.6 < low < 1.0
    assert high == 1.0
    low, high = wilson_interval(0, 10)
    assert low == 0.0
    assert 0.0 < high < 0.4
    narrow = wilson_interval(500, 1000)
    assert narrow[1] - narrow[0] < high - low
