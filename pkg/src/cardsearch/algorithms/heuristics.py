# -*- coding: utf-8 -*-
"""
Heuristic evaluation functions and the four ways of feeding them into the search:

- progressive bias adds ``w·h/(n+1)`` to the selection score,
- move ordering expands actions with high heuristic value first,
- biased simulations pick rollout moves ε-greedily or by Boltzmann sampling,
- early cutoff stops a rollout with a small probability per step and returns the heuristic value.

A heuristic maps a state and a player to an estimate in ``[0, 1]`` that this player wins.  The
value of an action is the value of its successor for the player who takes it::

    >>> from cardsearch.game import new_game
    >>> s = new_game(list(range(30)), list(range(30)), seed=0)
    >>> h = HealthHeuristic()
    >>> h.evaluate(s, 0) + h.evaluate(s, 1)
    1.0

..  moduleauthor:: The cardsearch developers

"""

from collections import OrderedDict, namedtuple

import numpy as np
from scipy.special import expit, softmax

from cardsearch.algorithms.mcts import RolloutResult, uct_score
from cardsearch.game.engine import CardGame
from cardsearch.util import ConfigError, EncodingMismatch

EpsilonGreedy = namedtuple("EpsilonGreedy", ("epsilon",))
Boltzmann = namedtuple("Boltzmann", ("temperature",))


class Heuristic(object):
    """
    Base class of heuristic evaluation functions.

    Subclasses implement ``estimate(state, perspective)`` for running games; finished games are
    always scored with their true outcome.  ``estimate_many`` may be overridden to evaluate several
    states at once.
    """

    def __init__(self, game=None):
        self.game = CardGame() if game is None else game

    def estimate(self, state, perspective):
        raise NotImplementedError

    def estimate_many(self, states, perspective):
        return [self.estimate(state, perspective) for state in states]

    def evaluate(self, state, perspective):
        """
        Return the estimated probability that ``perspective`` wins from ``state``.
        """
        if self.game.is_terminal(state):
            return self.game.reward(state, perspective)
        return float(self.estimate(state, perspective))

    def evaluate_many(self, states, perspective):
        values = [None] * len(states)
        running = []
        for i, state in enumerate(states):
            if self.game.is_terminal(state):
                values[i] = self.game.reward(state, perspective)
            else:
                running.append(i)
        if running:
            estimates = self.estimate_many([states[i] for i in running], perspective)
            for i, v in zip(running, estimates):
                values[i] = float(v)
        return values

    def evaluate_action(self, state, action):
        """
        Value of ``action`` for the player taking it in ``state``.
        """
        return self.evaluate_actions(state, [action])[0]

    def evaluate_actions(self, state, actions):
        """
        Values of ``actions`` for the player to move in ``state``, successors are evaluated in one
        batch.
        """
        game = self.game
        successors = [game.apply_action(state, a) for a in actions]
        return self.evaluate_many(successors, game.to_move(state))


class ConstantHeuristic(Heuristic):
    """
    Evaluates every running game to the same value.
    """

    def __init__(self, value=0.5, game=None):
        Heuristic.__init__(self, game)
        if not 0.0 <= value <= 1.0:
            raise ValueError("heuristic value must be in [0,1] but got %s" % value)
        self.value = float(value)

    def estimate(self, state, perspective):
        return self.value


class CallableHeuristic(Heuristic):
    """
    Wraps a function ``f(state, perspective)``; values are clipped to ``[0, 1]``.

        >>> h = CallableHeuristic(lambda state, perspective: 2.0)
        >>> h.estimate(None, 0)
        1.0

    """

    def __init__(self, function, game=None):
        Heuristic.__init__(self, game)
        self.function = function

    def estimate(self, state, perspective):
        return float(np.clip(self.function(state, perspective), 0.0, 1.0))


class HealthHeuristic(Heuristic):
    """
    Hand-crafted evaluation from hero health and board strength.

    The difference ``(my health + board) - (their health + board)`` is squashed by a logistic
    function with the given ``scale``.
    """

    def __init__(self, scale=10.0, board_weight=0.5, game=None):
        Heuristic.__init__(self, game)
        self.scale = float(scale)
        self.board_weight = float(board_weight)

    def _strength(self, player):
        board = sum(m.attack + m.health for m in player.board if m is not None)
        return player.hero_health + self.board_weight * board

    def estimate(self, state, perspective):
        me, opp = state.players[perspective], state.players[1 - perspective]
        return float(expit((self._strength(me) - self._strength(opp)) / self.scale))


class ValueNetworkHeuristic(Heuristic):
    """
    Evaluates states with a trained value network; successors are encoded and evaluated in a single
    forward pass.
    """

    def __init__(self, network, game=None):
        from cardsearch.features.encoding import STATE_WIDTH

        Heuristic.__init__(self, game)
        if network.input_width != STATE_WIDTH:
            raise EncodingMismatch(
                "value network expects %d inputs but states encode to %d" % (network.input_width, STATE_WIDTH)
            )
        self.network = network

    def estimate_many(self, states, perspective):
        from cardsearch.features.encoding import encode_states

        x = encode_states(states, perspective)
        return self.network.forward(x)[:, 0].tolist()

    def estimate(self, state, perspective):
        return self.estimate_many([state], perspective)[0]


class AugmentParam(object):
    """
    Which heuristic augmentations a search uses.

        >>> AugmentParam().neutral
        True
        >>> AugmentParam(simulation_mode="boltzmann").simulation
        Boltzmann(temperature=0.5)

    """

    def __init__(
        self,
        bias_weight=None,
        move_ordering=False,
        simulation_mode=None,
        epsilon=0.7,
        temperature=0.5,
        cutoff_probability=None,
    ):
        """
        :param bias_weight: weight ``w`` of the progressive bias or ``None``
        :param move_ordering: expand actions in descending heuristic order
        :param simulation_mode: ``None``, ``"epsilon"`` or ``"boltzmann"``
        :param epsilon: probability of the greedy move in ε-greedy rollouts
        :param temperature: Boltzmann temperature ``τ > 0``
        :param cutoff_probability: per-step probability of stopping a rollout or ``None``

        """
        if bias_weight is not None and bias_weight < 0:
            raise ConfigError("bias weight must be non-negative but got %s" % bias_weight)
        if simulation_mode not in (None, "epsilon", "boltzmann"):
            raise ConfigError("unknown simulation mode '%s'" % simulation_mode)
        if not 0.0 <= epsilon <= 1.0:
            raise ConfigError("epsilon must be in [0,1] but got %s" % epsilon)
        if not temperature > 0:
            raise ConfigError("temperature must be positive but got %s" % temperature)
        if cutoff_probability is not None and not 0.0 <= cutoff_probability <= 1.0:
            raise ConfigError("cutoff probability must be in [0,1] but got %s" % cutoff_probability)
        self.bias_weight = None if bias_weight is None else float(bias_weight)
        self.move_ordering = bool(move_ordering)
        self.simulation_mode = simulation_mode
        self.epsilon = float(epsilon)
        self.temperature = float(temperature)
        self.cutoff_probability = None if cutoff_probability is None else float(cutoff_probability)

    @property
    def simulation(self):
        if self.simulation_mode == "epsilon":
            return EpsilonGreedy(self.epsilon)
        if self.simulation_mode == "boltzmann":
            return Boltzmann(self.temperature)
        return None

    @property
    def uses_priors(self):
        return bool(self.bias_weight) or self.move_ordering

    @property
    def neutral(self):
        """
        ``True`` if no augmentation changes the search.
        """
        return (
            not self.uses_priors
            and (self.simulation_mode is None or (self.simulation_mode == "epsilon" and self.epsilon == 0.0))
            and not self.cutoff_probability
        )

    def dict(self):
        d = OrderedDict()
        d["bias_weight"] = self.bias_weight
        d["move_ordering"] = self.move_ordering
        d["simulation_mode"] = self.simulation_mode
        d["epsilon"] = self.epsilon
        d["temperature"] = self.temperature
        d["cutoff_probability"] = self.cutoff_probability
        return d

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - set(cls().dict())
        if unknown:
            raise ConfigError("unknown augmentation parameters %s" % sorted(unknown))
        return cls(**d)

    def __repr__(self):
        return "<AugmentParam(%s)>" % ", ".join("%s=%s" % (k, v) for k, v in self.dict().items())

    def __eq__(self, other):
        return isinstance(other, AugmentParam) and self.dict() == other.dict()

    def __ne__(self, other):
        return not self == other

    __hash__ = None


def progressive_bias_score(q, n_s, n_sa, c, h, w):
    """
    UCT score plus the progressive bias ``w·h/(n_sa + 1)``.

        >>> progressive_bias_score(0.5, 10, 1, 0.0, 0.8, 1.0)
        0.9

    """
    return uct_score(q, n_s, n_sa, c) + w * h / (n_sa + 1)


def order_moves(state, actions, heuristic, values=None):
    """
    Sort ``actions`` by descending heuristic value, equal values keep their order.  ``values`` are
    used instead of evaluating ``actions`` when given.

        >>> from cardsearch.game import new_game, legal_actions
        >>> s = new_game(list(range(30)), list(range(30)), seed=0)
        >>> order_moves(s, legal_actions(s), ConstantHeuristic()) == legal_actions(s)
        True

    """
    actions = list(actions)
    if not actions:
        return actions
    if values is None:
        values = heuristic.evaluate_actions(state, actions)
    return [actions[i] for i in sorted(range(len(actions)), key=lambda i: -values[i])]


def boltzmann_probabilities(values, temperature):
    """
    Sampling probabilities proportional to ``exp(v/τ)``.

        >>> p = boltzmann_probabilities([0.9, 0.1], 0.2)
        >>> round(float(p[0] / p[1]), 4)
        54.5982

    """
    return softmax(np.asarray(values, dtype=np.float64) / temperature)


def biased_rollout_step(state, mode, heuristic, rng, actions=None):
    """
    Pick a rollout move.

    :param state: a running game state
    :param mode: ``EpsilonGreedy(ε)`` or ``Boltzmann(τ)``
    :param heuristic: a ``Heuristic``
    :param rng: a ``random.Random`` instance
    :param actions: the legal actions of ``state``, computed if not given

    With ``ε = 0`` the move is ``rng.choice(actions)`` and no other random number is drawn.
    """
    if actions is None:
        actions = heuristic.game.legal_actions(state)

    if isinstance(mode, EpsilonGreedy):
        if mode.epsilon > 0 and rng.random() < mode.epsilon:
            values = heuristic.evaluate_actions(state, actions)
            return actions[int(np.argmax(values))]
        return rng.choice(actions)

    if isinstance(mode, Boltzmann):
        p = boltzmann_probabilities(heuristic.evaluate_actions(state, actions), mode.temperature)
        i = int(np.searchsorted(np.cumsum(p), rng.random(), side="right"))
        return actions[min(i, len(actions) - 1)]

    raise ValueError("unknown simulation mode %r" % (mode,))


def simulate(state, root_player, heuristic, rng, mode=None, cutoff_probability=None):
    """
    Play out ``state`` with optional biased moves and early cutoff.

    :param state: a game state
    :param root_player: the player the result is scored for
    :param heuristic: a ``Heuristic``, its ``game`` drives the playout
    :param rng: a ``random.Random`` instance
    :param mode: ``None`` for uniform moves, ``EpsilonGreedy`` or ``Boltzmann``
    :param cutoff_probability: probability of stopping before each move, ``None`` or ``0`` never
        draws
    :returns: a ``RolloutResult``

    """
    game = heuristic.game
    steps = 0
    while not game.is_terminal(state):
        if cutoff_probability and rng.random() < cutoff_probability:
            mover = game.to_move(state)
            v = heuristic.evaluate(state, mover)
            return RolloutResult(v if mover == root_player else 1.0 - v, steps)
        actions = game.legal_actions(state)
        if mode is None:
            action = rng.choice(actions)
        else:
            action = biased_rollout_step(state, mode, heuristic, rng, actions)
        state = game.apply_action(state, action)
        steps += 1
    return RolloutResult(game.reward(state, root_player), steps)


def rollout_with_cutoff(state, p, heuristic, rng, root_player=None):
    """
    Uniform playout that stops with probability ``p`` before each move and returns the heuristic
    value of the current state for ``root_player`` (the player to move in ``state`` by default).

        >>> import random
        >>> from cardsearch.game import new_game
        >>> s = new_game(list(range(30)), list(range(30)), seed=0)
        >>> rollout_with_cutoff(s, 1.0, ConstantHeuristic(0.25), random.Random(0), root_player=1)
        0.75

    """
    if root_player is None:
        root_player = heuristic.game.to_move(state)
    return simulate(state, root_player, heuristic, rng, cutoff_probability=p).value
