# -*- coding: utf-8 -*-

from cardsearch.game import load_decks
from cardsearch.tools.benchmark import bench_playouts, soundness


def test_soundness():
    counts = soundness(5, seed=3, check_all=True)
    assert counts["games"] == 5
    assert counts["actions"] > 0
    assert counts["illegal"] == 0
    assert counts["invariants"] == 0
    assert counts["turn_limit"] == 0
    assert 0 <= counts["player0_wins"] <= 5


def test_soundness_test_decks():
    counts = soundness(5, seed=4, decks=load_decks()["test"])
    assert (counts["illegal"], counts["invariants"], counts["turn_limit"]) == (0, 0, 0)


def test_bench_playouts():
    actions, walltime = bench_playouts(3, seed=1)
    assert actions > 0
    assert walltime >= 0.0
    assert bench_playouts(3, seed=1)[0] == actions
