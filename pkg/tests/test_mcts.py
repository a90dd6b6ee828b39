# -*- coding: utf-8 -*-

import random
from math import log, sqrt

import numpy as np
import pytest

from cardsearch.algorithms.mcts import (
    MCTS,
    MCTSParam,
    SearchNode,
    best_action,
    mcts_choose,
    mcts_iteration,
    uct_score,
    uct_select,
)
from cardsearch.game import PendingKind, apply_action, legal_actions
from cardsearch.game.actions import ATTACK_OFFSET, END_TURN, ENEMY_HERO, TARGET_OFFSET
from cardsearch.tools.search_stats import SearchTreeTracer
from cardsearch.util import ConfigError, EmptyNode

import tools

# payoff of player 0 after (first move, reply); the row with the best average is not the minimax row
PAYOFF = ((0.9, 0.9, 0.0), (0.6, 0.5, 0.55), (0.3, 1.0, 0.4))


class TableGame(object):
    """
    Two plies over ``PAYOFF``, a state is the tuple of moves played.
    """

    def legal_actions(self, state):
        return [0, 1, 2]

    def apply_action(self, state, action):
        return state + (action,)

    def to_move(self, state):
        return len(state) % 2

    def is_terminal(self, state):
        return len(state) == 2

    def reward(self, state, player):
        v = PAYOFF[state[0]][state[1]]
        return v if player == 0 else 1.0 - v


class Nim(object):
    """
    Take one to three stones, whoever takes the last stone wins.  A state is ``(stones, to_move)``.
    """

    def legal_actions(self, state):
        return [k for k in (1, 2, 3) if k <= state[0]]

    def apply_action(self, state, action):
        return (state[0] - action, 1 - state[1])

    def to_move(self, state):
        return state[1]

    def is_terminal(self, state):
        return state[0] == 0

    def reward(self, state, player):
        # the player who just moved took the last stone
        return 1.0 if player != state[1] else 0.0


def minimax(game, state):
    """
    Value of ``state`` for the player to move and the best action, ties to the lowest action.
    Both games alternate movers every ply.
    """
    me = game.to_move(state)
    best, best_value = None, None
    for a in game.legal_actions(state):
        child = game.apply_action(state, a)
        if game.is_terminal(child):
            v = game.reward(child, me)
        else:
            v = 1.0 - minimax(game, child)[0]
        if best_value is None or v > best_value:
            best, best_value = a, v
    return best_value, best


def check_visits(node):
    assert node.visits == sum(e.n for e in node.edges.values())
    for e in node.edges.values():
        if e.child is not None:
            check_visits(e.child)


def test_uct_score():
    assert uct_score(0.4, 100, 10, 1.414) == 0.4 + 1.414 * sqrt(log(100) / 10)
    assert abs(uct_score(0.4, 100, 10, 1.414) - 1.359) < 1e-3
    assert abs(uct_score(0.6, 100, 90, 1.414) - 0.920) < 1e-3


def make_node(stats, visits=None):
    node = SearchNode(None, 0, actions=range(len(stats)))
    for a, (q, n) in enumerate(stats):
        node.edges[a].n = n
        node.edges[a].total = q * n
    node.visits = sum(n for _, n in stats) if visits is None else visits
    return node


def test_uct_select():
    assert uct_select(make_node([(0.3, 5), (0.7, 5)]), 0.0) == 1
    assert uct_select(make_node([(1.0, 10), (0.0, 0)]), 1.414) == 1
    assert uct_select(make_node([(0.0, 0), (0.0, 0)]), 1.414) == 0
    assert uct_select(make_node([(0.6, 90), (0.4, 10)], visits=100), 1.414) == 1
    assert uct_select(make_node([(0.6, 90), (0.4, 10)], visits=100), 0.0) == 0
    # ties go to the lowest index
    assert uct_select(make_node([(0.5, 4), (0.5, 4)]), 1.0) == 0
    with pytest.raises(EmptyNode):
        uct_select(SearchNode(None, 0), 1.0)


def test_uct_select_shift_invariance():
    rng = np.random.default_rng(0)
    for _ in range(200):
        k = int(rng.integers(2, 8))
        stats = [(float(rng.random()), int(rng.integers(1, 50))) for _ in range(k)]
        shift = float(rng.uniform(-0.5, 0.5))
        c = float(rng.uniform(0.0, 2.0))
        a = uct_select(make_node(stats), c)
        b = uct_select(make_node([(q + shift, n) for q, n in stats]), c)
        assert a == b


def test_uct_select_greedy_without_exploration():
    rng = np.random.default_rng(1)
    for _ in range(100):
        stats = [(float(rng.random()), int(rng.integers(1, 50))) for _ in range(5)]
        assert uct_select(make_node(stats), 0.0) == int(np.argmax([q for q, _ in stats]))


def test_best_action():
    node = make_node([(0.9, 3), (0.5, 10), (0.2, 10)])
    assert best_action(node, "robust") == 1
    assert best_action(node, "max") == 0


def test_param():
    p = MCTSParam(iterations=10, exploration=0.5, seed=3)
    assert MCTSParam.from_dict(p.dict()) == p
    with pytest.raises(ConfigError):
        MCTSParam(iterations=0)
    with pytest.raises(ConfigError):
        MCTSParam(exploration=-1)
    with pytest.raises(ConfigError):
        MCTSParam.from_dict({"iterations": 5, "budget": 3})


def test_fresh_root_sweep():
    s = tools.start(0)
    search = MCTS()
    root = search.new_node(s)
    k = len(root.edges)
    rng = random.Random(0)
    for _ in range(k):
        mcts_iteration(root, MCTSParam(), rng)
    assert all(e.n == 1 for e in root.edges.values())
    assert root.visits == k


def test_visit_accounting():
    for seed, iterations in ((0, 1), (1, 17), (2, 60)):
        search = MCTS()
        search(tools.start(seed), MCTSParam(iterations=iterations, seed=seed))
        assert search.root.visits == iterations
        assert search.simulations == iterations
        check_visits(search.root)
        for e in search.root.edges.values():
            if e.n:
                assert abs(e.q - e.total / e.n) < 1e-9
                assert 0.0 <= e.q <= 1.0


def test_single_iteration():
    s = tools.start(4)
    assert mcts_choose(s, MCTSParam(iterations=1)) == legal_actions(s)[0] == END_TURN


def test_reproducible():
    s = tools.start(6)
    a = MCTS()
    b = MCTS()
    assert a(s, MCTSParam(iterations=40, seed=9)) == b(s, MCTSParam(iterations=40, seed=9))
    assert a.root.statistics() == b.root.statistics()


def test_terminal_root():
    s = tools.make_state(me=dict(board=tools.board(tools.minion(6, 3, 3))), opp=dict(hero_health=3))
    t = apply_action(apply_action(s, ATTACK_OFFSET), TARGET_OFFSET + ENEMY_HERO)
    with pytest.raises(EmptyNode):
        MCTS()(t, MCTSParam(iterations=5))


def test_lethal():
    s = tools.make_state(
        me=dict(board=tools.board(tools.minion(6, 3, 3))),
        opp=dict(hero_health=3, board=tools.board(tools.minion(3, 2, 3), tools.minion(5, 1, 4))),
        pending=(PendingKind.ATTACK, 0),
    )
    lethal = TARGET_OFFSET + ENEMY_HERO
    assert lethal in legal_actions(s)
    for seed in range(3):
        search = MCTS()
        assert search(s, MCTSParam(iterations=200, seed=seed)) == lethal
        stats = search.root.statistics()
        n, q = stats[lethal]
        assert n == max(v[0] for v in stats.values())
        assert q >= 0.9


def test_minimax_table_game():
    game = TableGame()
    _, oracle = minimax(game, ())
    assert oracle == 1
    agree = 0
    for seed in range(20):
        agree += mcts_choose((), MCTSParam(iterations=2000, seed=seed), game=game) == oracle
    assert agree >= 19


def test_minimax_nim():
    game = Nim()
    for stones in (2, 3, 5, 6, 7):
        for player in (0, 1):
            state = (stones, player)
            _, oracle = minimax(game, state)
            assert oracle == stones % 4
            for seed in range(3):
                assert mcts_choose(state, MCTSParam(iterations=2000, seed=seed), game=game) == oracle


def test_tracer():
    search = MCTS()
    s = tools.start(2)
    search(s, MCTSParam(iterations=12, seed=2), tracer=SearchTreeTracer)
    trace = search.trace
    assert float(trace.find("search")["iterations"]) == 12
    assert float(trace.find("search")["simulations"]) == 12
