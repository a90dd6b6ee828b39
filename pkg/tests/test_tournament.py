# -*- coding: utf-8 -*-

import json

import pytest

from cardsearch.agents import GreedyPolicyAgent, GreedyValueAgent, MCTSAgent, RandomAgent, make_agent, play_game
from cardsearch.algorithms.heuristics import HealthHeuristic
from cardsearch.algorithms.mcts import MCTSParam
from cardsearch.game import legal_actions, load_decks
from cardsearch.nn import policy_network, value_network
from cardsearch.tools.compare import agent_names, pick_decks, play, run_tournament
from cardsearch.util import ConfigError, derive_seed

import tools

AGENTS = [{"type": "random"}, {"type": "mcts", "iterations": 2}, {"type": "random", "name": "rival"}]


def test_agent_names():
    assert agent_names(AGENTS) == ["random", "mcts(2)", "rival"]
    assert agent_names([{"type": "random"}] * 3) == ["random", "random#1", "random#2"]


def test_pick_decks():
    decks = load_decks()["train"]
    assert pick_decks(3, decks) == pick_decks(3, decks)
    (name0, cards0), (name1, cards1) = pick_decks(3, decks)
    assert name0 in [d.name for d in decks] and len(cards0) == 30
    assert pick_decks(0, [tools.DECK])[0] == ("deck0", tuple(tools.DECK))


def test_play_game():
    log = play_game((RandomAgent(), RandomAgent()), (tools.DECK, tools.MIRROR), seed=7)
    assert len(log.states) == len(log.actions) + 1
    assert log.outcome == log.states[-1].outcome
    assert log.states[0] == tools.start(7, tools.DECK, tools.MIRROR)
    again = play_game((RandomAgent(), RandomAgent()), (tools.DECK, tools.MIRROR), seed=7)
    assert again.actions == log.actions


def test_play():
    decks = pick_decks(derive_seed(1, 0), load_decks()["train"])
    result = play(0, AGENTS[:2], decks, derive_seed(1, 0), record=True)
    assert result.winner in (0, 1)
    assert result.agents == ("random", "mcts(2)")
    assert result.actions == len(result.log.actions)
    assert result.stats[1]["decisions"] == sum(1 for s in result.log.states[:-1] if s.active_player == 1)


def test_mcts_agent():
    agent = MCTSAgent(MCTSParam(iterations=3), heuristic=HealthHeuristic())
    s = tools.start(0)
    assert agent.choose(s) in legal_actions(s)
    assert agent.stats()["simulations"] == 3
    assert agent.spec()["heuristic"] == "HealthHeuristic"


def test_greedy_agents():
    value = GreedyValueAgent(value_network(hidden=(4,), seed=1))
    policy = GreedyPolicyAgent(policy_network(hidden=4, depth=1, seed=1))
    log = play_game((value, policy), (tools.DECK, tools.DECK), seed=2)
    for s, a in zip(log.states, log.actions):
        assert a in legal_actions(s)
    stats = policy.stats()
    assert stats["decisions"] == sum(1 for s in log.states[:-1] if s.active_player == 1)
    assert 0 <= stats["illegal_argmax"] <= stats["decisions"]
    assert stats["illegal_argmax_rate"] == stats["illegal_argmax"] / float(stats["decisions"])


def test_make_agent(tmp_path):
    assert isinstance(make_agent({"type": "random"}), RandomAgent)
    agent = make_agent({"type": "mcts", "iterations": 5, "heuristic": {"type": "health"}, "name": "m"})
    assert agent.name == "m" and isinstance(agent.heuristic, HealthHeuristic)

    filename = str(tmp_path / "value.csnn")
    value_network(hidden=(3,)).save(filename)
    agent = make_agent({"type": "greedy_value", "model": "value.csnn"}, base_dir=str(tmp_path))
    assert isinstance(agent, GreedyValueAgent)
    net = value_network(hidden=(3,))
    assert make_agent({"type": "greedy_value", "model": "v"}, models={"v": net}).network is net

    with pytest.raises(ConfigError):
        make_agent({"type": "alphabeta"})
    with pytest.raises(ConfigError):
        make_agent({"type": "greedy_value", "model": "missing.csnn"}, base_dir=str(tmp_path))
    with pytest.raises(ConfigError):
        make_agent({"type": "greedy_policy"})
    with pytest.raises(ConfigError):
        make_agent({"type": "mcts", "iterations": 5, "depth": 3})
    with pytest.raises(ConfigError):
        make_agent({"type": "mcts", "augment": {"move_ordering": True}})
    with pytest.raises(ConfigError):
        make_agent({"type": "mcts", "heuristic": {"type": "oracle"}})


def test_tournament():
    decks = load_decks()["train"]
    report = run_tournament(AGENTS, 4, 11, decks)
    assert len(report.pairings) == 3
    assert len(report.games) == 12
    for p in report.pairings:
        assert p["games"] == 4
        assert p["wins"] + p["losses"] == 4
        assert p["wilson_low"] <= p["win_rate"] <= p["wilson_high"]
    p = report.pairing(0, 1)
    assert (p["name_a"], p["name_b"]) == ("random", "mcts(2)")
    with pytest.raises(KeyError):
        report.pairing(1, 0)
    # every pairing uses the same seed schedule
    seeds = [g["seed"] for g in report.games if (g["a"], g["b"]) == (0, 1)]
    assert seeds == [derive_seed(11, g) for g in range(4)]
    assert "mcts(2)" in report.summary()


def test_tournament_mirrored():
    decks = load_decks()["train"]
    models = {"net": value_network(hidden=(8,), seed=2)}
    greedy = {"type": "greedy_value", "model": "net"}
    report = run_tournament([greedy, greedy], 10, 5, decks, models=models, mirrored=True)
    p = report.pairing(0, 1)
    assert 0.4 <= p["win_rate"] <= 0.6
    assert p["win_rate"] == 0.5
    seeds = [g["seed"] for g in report.games]
    assert seeds[0::2] == seeds[1::2] == [derive_seed(5, k) for k in range(5)]
    for first, second in zip(report.games[0::2], report.games[1::2]):
        assert first["decks"] == second["decks"]
        assert first["winner"] == second["winner"]
        assert first["actions"] == second["actions"]


def test_tournament_reproducible(tmp_path):
    decks = load_decks()["train"]
    a = run_tournament(AGENTS[:2], 4, 3, decks)
    b = run_tournament(AGENTS[:2], 4, 3, decks, workers=2)
    assert a.digest() == b.digest()
    assert a.games == b.games

    filename = str(tmp_path / "tournament.jsonl")
    a.write_jsonl(filename)
    with open(filename) as fh:
        lines = [json.loads(line) for line in fh]
    assert len(lines) == 1 + 1 + 4
    assert [line["record"] for line in lines[:2]] == ["tournament", "pairing"]


def test_tournament_errors():
    decks = load_decks()["train"]
    with pytest.raises(ValueError):
        run_tournament(AGENTS[:1], 2, 0, decks)
    with pytest.raises(ValueError):
        run_tournament(AGENTS, 0, 0, decks)
