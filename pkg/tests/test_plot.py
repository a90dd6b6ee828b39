# -*- coding: utf-8 -*-

import os

import numpy as np
import pytest

from cardsearch.tools.experiments import write_per_turn_csv
from cardsearch.tools.metrics import auc_report

pytest.importorskip("matplotlib")

from cardsearch.tools.plot import plot_history, plot_per_turn_auc  # noqa: E402


def reports():
    rng = np.random.default_rng(0)
    labels = rng.integers(0, 2, 300)
    turns = rng.integers(1, 40, 300)
    return {
        "random": auc_report(labels + rng.normal(0.0, 1.0, 300), labels, turns),
        "mcts": auc_report(labels + rng.normal(0.0, 2.0, 300), labels, turns),
    }


def test_plot_per_turn_auc(tmp_path):
    filename = plot_per_turn_auc(reports(), basename=str(tmp_path / "auc"), dpi=50)
    assert filename == str(tmp_path / "auc.png")
    assert os.path.getsize(filename) > 0

    csv = str(tmp_path / "per_turn_auc.csv")
    write_per_turn_csv(reports(), csv)
    filename = plot_per_turn_auc(csv, basename=str(tmp_path / "from-csv"), extension="pdf", min_examples=5)
    assert os.path.exists(filename)


def test_plot_history(tmp_path):
    filename = plot_history({"low": [0.7, 0.6, 0.5], "high": [0.8, 0.5]}, basename=str(tmp_path / "loss"), dpi=50)
    assert os.path.getsize(filename) > 0
