# -*- coding: utf-8 -*-

import random
from math import exp, sqrt

import numpy as np
import pytest

from cardsearch.algorithms.heuristic_mcts import HeuristicMCTS
from cardsearch.algorithms.heuristics import (
    AugmentParam,
    Boltzmann,
    CallableHeuristic,
    ConstantHeuristic,
    EpsilonGreedy,
    HealthHeuristic,
    Heuristic,
    biased_rollout_step,
    boltzmann_probabilities,
    order_moves,
    progressive_bias_score,
    rollout_with_cutoff,
    simulate,
)
from cardsearch.algorithms.mcts import MCTS, MCTSParam, mcts_choose, uct_score
from cardsearch.game import CardGame, PendingKind, apply_action, legal_actions, playout_random
from cardsearch.game.actions import ENEMY_HERO, TARGET_OFFSET
from cardsearch.util import ConfigError

import tools

NEUTRAL = AugmentParam(bias_weight=0.0, simulation_mode="epsilon", epsilon=0.0, cutoff_probability=0.0)


class FixedValues(Heuristic):
    """
    Returns ``values`` for any list of actions of the same length.
    """

    def __init__(self, values):
        Heuristic.__init__(self)
        self.values = list(values)

    def estimate(self, state, perspective):
        return 0.5

    def evaluate_actions(self, state, actions):
        return list(self.values)


class IndexValue(Heuristic):
    def estimate(self, state, perspective):
        return 0.5

    def evaluate_actions(self, state, actions):
        return [float(a) for a in actions]


def lethal_state():
    return tools.make_state(
        me=dict(board=tools.board(tools.minion(6, 3, 3))),
        opp=dict(hero_health=3, board=tools.board(tools.minion(3, 2, 3), tools.minion(5, 1, 4))),
        pending=(PendingKind.ATTACK, 0),
    )


def test_progressive_bias():
    rng = np.random.default_rng(0)
    for _ in range(50):
        q, h, c = float(rng.random()), float(rng.random()), float(rng.uniform(0, 2))
        n_sa = int(rng.integers(1, 40))
        n_s = n_sa + int(rng.integers(0, 40))
        assert progressive_bias_score(q, n_s, n_sa, c, h, 0.0) == uct_score(q, n_s, n_sa, c)
    assert abs(progressive_bias_score(0.5, 10, 1, 0.0, 0.8, 1.0) - 0.9) < 1e-12
    assert abs(progressive_bias_score(0.5, 10, 1, 1.0, 0.8, 1.0) - uct_score(0.5, 10, 1, 1.0) - 0.4) < 1e-12
    # equal statistics, the larger prior wins
    assert progressive_bias_score(0.5, 20, 5, 1.0, 0.9, 2.0) > progressive_bias_score(0.5, 20, 5, 1.0, 0.1, 2.0)


def test_bias_decays():
    gaps = [progressive_bias_score(0.5, 1000, n, 1.0, 1.0, 1.0) - uct_score(0.5, 1000, n, 1.0) for n in (1, 9, 99)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert abs(gaps[2] - 0.01) < 1e-12


def test_order_moves():
    states, _ = tools.random_trace(2)
    for s in states[::9]:
        if CardGame().is_terminal(s):
            continue
        actions = legal_actions(s)
        assert order_moves(s, actions, ConstantHeuristic(0.3)) == actions
        assert order_moves(s, actions, IndexValue()) == actions[::-1]
        assert order_moves(s, actions, HealthHeuristic(scale=10.0)) == order_moves(
            s, actions, HealthHeuristic(scale=20.0)
        )
    assert order_moves(tools.start(0), [], ConstantHeuristic()) == []


def test_order_moves_lethal_first():
    s = lethal_state()
    assert order_moves(s, legal_actions(s), HealthHeuristic())[0] == TARGET_OFFSET + ENEMY_HERO


def test_health_heuristic():
    h = HealthHeuristic()
    states, _ = tools.random_trace(4)
    for s in states[::5]:
        v0, v1 = h.evaluate(s, 0), h.evaluate(s, 1)
        assert 0.0 <= v0 <= 1.0
        assert abs(v0 + v1 - 1.0) < 1e-12
    final = states[-1]
    assert h.evaluate(final, final.outcome.winner) == 1.0
    hurt = tools.make_state(opp=dict(hero_health=5))
    assert h.evaluate(hurt, 0) > 0.5


def test_callable_and_constant():
    with pytest.raises(ValueError):
        ConstantHeuristic(1.5)
    h = CallableHeuristic(lambda state, perspective: -1.0)
    assert h.evaluate(tools.start(0), 0) == 0.0
    s = tools.start(0)
    assert h.evaluate_actions(s, legal_actions(s)) == [0.0] * len(legal_actions(s))


def test_epsilon_one_is_greedy():
    h = FixedValues([0.1, 0.7, 0.3])
    rng = random.Random(0)
    for _ in range(200):
        assert biased_rollout_step(None, EpsilonGreedy(1.0), h, rng, [4, 5, 6]) == 5


def test_epsilon_zero_is_uniform():
    h = FixedValues([0.1, 0.7, 0.3])
    a, b = random.Random(5), random.Random(5)
    actions = [4, 5, 6]
    for _ in range(500):
        assert biased_rollout_step(None, EpsilonGreedy(0.0), h, a, actions) == b.choice(actions)


def test_epsilon_frequencies():
    h = FixedValues([0.1, 0.7, 0.3])
    rng = random.Random(1)
    n, epsilon = 30000, 0.7
    picks = [biased_rollout_step(None, EpsilonGreedy(epsilon), h, rng, [0, 1, 2]) for _ in range(n)]
    p = epsilon + (1 - epsilon) / 3.0
    count = picks.count(1)
    assert abs(count - n * p) < 5 * sqrt(n * p * (1 - p))


def test_boltzmann():
    p = boltzmann_probabilities([0.9, 0.1, 0.4], 0.2)
    assert abs(float(p.sum()) - 1.0) < 1e-12
    assert float(p[0]) > float(p[2]) > float(p[1])

    h = FixedValues([0.9, 0.1])
    rng = random.Random(2)
    n = 50000
    count = sum(biased_rollout_step(None, Boltzmann(0.2), h, rng, [0, 1]) for _ in range(n))
    q = 1.0 / (1.0 + exp(4.0))
    assert abs(count - n * q) < 5 * sqrt(n * q * (1 - q))


def test_unknown_mode():
    with pytest.raises(ValueError):
        biased_rollout_step(None, "greedy", FixedValues([0.5]), random.Random(0), [0])


def test_cutoff_never():
    h = ConstantHeuristic(0.25)
    for seed in range(5):
        s = tools.start(seed)
        outcome = playout_random(s, random.Random(seed))
        result = simulate(s, 0, h, random.Random(seed), cutoff_probability=0.0)
        assert result.value == (1.0 if outcome.winner == 0 else 0.0)
        assert result.steps > 0


def test_cutoff_always():
    s = tools.start(0)
    h = ConstantHeuristic(0.25)
    result = simulate(s, 0, h, random.Random(0), cutoff_probability=1.0)
    assert result == (0.25, 0)
    assert rollout_with_cutoff(s, 1.0, h, random.Random(0)) == 0.25
    assert rollout_with_cutoff(s, 1.0, h, random.Random(0), root_player=1) == 0.75


def test_cutoff_length():
    s = tools.start(1)
    h = HealthHeuristic()
    rng = random.Random(3)
    steps = []
    for _ in range(4000):
        result = simulate(s, 0, h, rng, cutoff_probability=0.1)
        assert 0.0 <= result.value <= 1.0
        steps.append(result.steps)
    assert np.mean(steps) <= 10.0


def test_augment_param():
    assert NEUTRAL.neutral
    assert not AugmentParam(bias_weight=1.0).neutral
    assert not AugmentParam(simulation_mode="epsilon").neutral
    assert AugmentParam.from_dict(NEUTRAL.dict()) == NEUTRAL
    with pytest.raises(ConfigError):
        AugmentParam(epsilon=1.5)
    with pytest.raises(ConfigError):
        AugmentParam(temperature=0.0)
    with pytest.raises(ConfigError):
        AugmentParam(simulation_mode="greedy")
    with pytest.raises(ConfigError):
        AugmentParam(cutoff_probability=-0.1)
    with pytest.raises(ConfigError):
        AugmentParam.from_dict({"bias": 1.0})
    with pytest.raises(ValueError):
        HeuristicMCTS(augment=AugmentParam(move_ordering=True))


def test_neutral_augment_matches_plain_search():
    states, _ = tools.random_trace(8)
    for i, s in enumerate(states[:40:8]):
        if CardGame().is_terminal(s):
            continue
        plain = MCTS()
        a = plain(s, MCTSParam(iterations=50, seed=i))
        augmented = HeuristicMCTS(heuristic=HealthHeuristic(), augment=NEUTRAL)
        b = augmented(s, MCTSParam(iterations=50, seed=i, augment=NEUTRAL))
        assert a == b
        assert plain.root.statistics() == augmented.root.statistics()


def test_neutral_augment_full_game():
    s = tools.start(12)
    k = 0
    while not CardGame().is_terminal(s):
        a = mcts_choose(s, MCTSParam(iterations=4, seed=k))
        b = mcts_choose(s, MCTSParam(iterations=4, seed=k, augment=NEUTRAL))
        assert a == b
        s = apply_action(s, a)
        k += 1


def test_augmentations_are_legal():
    h = HealthHeuristic()
    augments = (
        AugmentParam(bias_weight=1.0),
        AugmentParam(move_ordering=True),
        AugmentParam(simulation_mode="epsilon", epsilon=0.7),
        AugmentParam(simulation_mode="boltzmann", temperature=0.5),
        AugmentParam(cutoff_probability=0.1),
        AugmentParam(bias_weight=0.5, move_ordering=True, simulation_mode="boltzmann", cutoff_probability=0.2),
    )
    states, _ = tools.random_trace(9)
    for augment in augments:
        for i, s in enumerate(states[:20:10]):
            search = HeuristicMCTS(heuristic=h, augment=augment)
            a = search(s, MCTSParam(iterations=10, seed=i, augment=augment))
            assert a in legal_actions(s)
            assert search.root.visits == 10


def test_move_ordering_root():
    h = HealthHeuristic()
    augment = AugmentParam(move_ordering=True)
    states, _ = tools.random_trace(6)
    for s in states[:50:10]:
        root = HeuristicMCTS(heuristic=h, augment=augment).new_node(s)
        assert root.untried == order_moves(s, legal_actions(s), h)

    s = lethal_state()
    lethal = TARGET_OFFSET + ENEMY_HERO
    assert mcts_choose(s, MCTSParam(iterations=1, augment=augment), heuristic=h) == lethal


def test_move_ordering_ties():
    s = lethal_state()
    actions = legal_actions(s)
    values = [0.5] * len(actions)
    values[-1] = 0.9
    h = FixedValues(values)
    calls = []
    evaluate = h.evaluate_actions
    h.evaluate_actions = lambda state, acts: calls.append(acts) or evaluate(state, acts)

    root = HeuristicMCTS(heuristic=h, augment=AugmentParam(move_ordering=True, bias_weight=1.0)).new_node(s)
    assert root.untried == [actions[-1]] + actions[:-1]
    assert root.untried == order_moves(s, actions, None, values)
    assert len(calls) == 1
    assert root.edges[actions[-1]].prior == 0.9


def test_priors_recorded():
    h = HealthHeuristic()
    s = lethal_state()
    root = HeuristicMCTS(heuristic=h, augment=AugmentParam(bias_weight=1.0)).new_node(s)
    # untouched order without move ordering
    assert root.untried == legal_actions(s)
    assert root.edges[TARGET_OFFSET + ENEMY_HERO].prior == 1.0
    assert all(0.0 <= e.prior <= 1.0 for e in root.edges.values())
