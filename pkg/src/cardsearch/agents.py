# -*- coding: utf-8 -*-
"""
Players of the card game.

Every agent implements ``choose(state)``, which returns one of ``legal_actions(state)``, and
``reset(seed)``, which is called before every game.  ``observe(state, action, next_state)`` is
called for every move of either player.

    >>> deck = list(range(15)) * 2
    >>> log = play_game((RandomAgent(), RandomAgent()), (deck, deck), seed=3)
    >>> log.outcome.winner in (0, 1), len(log.states) == len(log.actions) + 1
    (True, True)

..  moduleauthor:: The cardsearch developers

"""

import logging
import os
import random
from collections import OrderedDict, namedtuple

from cardsearch.algorithms.greedy import greedy_policy_choose, greedy_value_choose
from cardsearch.algorithms.heuristics import HealthHeuristic, ValueNetworkHeuristic
from cardsearch.algorithms.mcts import MCTSParam, search_for
from cardsearch.features.encoding import WINDOW, sequence_window
from cardsearch.game.engine import apply_action, legal_actions, new_game
from cardsearch.util import ConfigError, derive_seed

logger = logging.getLogger(__name__)

GameLog = namedtuple("GameLog", ("states", "actions", "outcome", "seed", "agents"))


class Agent(object):
    """
    Base class of all agents.
    """

    kind = None

    def __init__(self, seed=0, name=None):
        self.seed = seed
        self.rng = random.Random(seed)
        self.name = name or self.kind

    def reset(self, seed=None):
        """
        Prepare for a new game, reseeding the agent's generator if ``seed`` is given.
        """
        if seed is not None:
            self.seed = seed
        self.rng = random.Random(self.seed)

    def choose(self, state):
        raise NotImplementedError

    def observe(self, state, action, next_state):
        pass

    def stats(self):
        """
        Counters collected since construction.
        """
        return OrderedDict()

    def spec(self):
        """
        Description of this agent for reports.
        """
        return OrderedDict([("type", self.kind), ("name", self.name)])

    def __repr__(self):
        return "<%s(%s)>" % (self.__class__.__name__, self.name)


class RandomAgent(Agent):
    """
    Plays uniformly random legal actions.
    """

    kind = "random"

    def choose(self, state):
        return self.rng.choice(legal_actions(state))


class MCTSAgent(Agent):
    """
    Runs a fresh search for every decision, optionally augmented by a heuristic.
    """

    kind = "mcts"

    def __init__(self, param, heuristic=None, seed=0, name=None, tracer=False):
        """
        :param param: an ``MCTSParam``
        :param heuristic: a ``Heuristic`` used by the augmentations in ``param.augment``
        :param seed: seed of the rollout generator
        :param name: label in reports
        :param tracer: see ``normalize_tracer`` for accepted values

        """
        Agent.__init__(self, seed, name or "mcts(%d)" % param.iterations)
        self.param = param
        self.heuristic = heuristic
        self.tracer = tracer
        self.search = search_for(param, heuristic=heuristic)
        self.decisions = 0
        self.simulations = 0

    def choose(self, state):
        action = self.search(state, self.param, rng=self.rng, tracer=self.tracer)
        self.decisions += 1
        self.simulations += self.search.simulations
        return action

    def stats(self):
        return OrderedDict([("decisions", self.decisions), ("simulations", self.simulations)])

    def spec(self):
        d = Agent.spec(self)
        d["param"] = self.param.dict()
        d["heuristic"] = None if self.heuristic is None else self.heuristic.__class__.__name__
        return d


class GreedyValueAgent(Agent):
    """
    Plays the action with the best successor according to a value network.
    """

    kind = "greedy_value"

    def __init__(self, network, seed=0, name=None):
        Agent.__init__(self, seed, name)
        self.network = network

    def choose(self, state):
        return greedy_value_choose(state, self.network)


class GreedyPolicyAgent(Agent):
    """
    Plays the most probable legal action of a policy network fed with the last ``window`` states
    and actions of the game.

    The agent follows the game through ``observe``.  The number of decisions where the network's
    most probable action was illegal is reported by ``stats``.
    """

    kind = "greedy_policy"

    def __init__(self, network, window=WINDOW, seed=0, name=None):
        Agent.__init__(self, seed, name)
        self.network = network
        self.window = window
        self.decisions = 0
        self.illegal_argmax = 0
        self._states = []
        self._actions = []

    def reset(self, seed=None):
        Agent.reset(self, seed)
        self._states = []
        self._actions = []

    def observe(self, state, action, next_state):
        if not self._states or self._states[-1] is not state:
            self._states, self._actions = [state], []
        self._states.append(next_state)
        self._actions.append(action)

    def choose(self, state):
        if not self._states or self._states[-1] is not state:
            self._states, self._actions = [state], []
        t = len(self._states) - 1
        window = sequence_window(self._states, self._actions, t, state.active_player, self.window)
        actions = legal_actions(state)
        action, raw = greedy_policy_choose(window, self.network, actions)
        self.decisions += 1
        if raw not in actions:
            self.illegal_argmax += 1
        return action

    def stats(self):
        rate = self.illegal_argmax / float(self.decisions) if self.decisions else 0.0
        return OrderedDict(
            [("decisions", self.decisions), ("illegal_argmax", self.illegal_argmax), ("illegal_argmax_rate", rate)]
        )


def play_game(agents, decks, seed, rules=None):
    """
    Play one game.

    :param agents: the agents for player 0 and player 1
    :param decks: the card lists of player 0 and player 1
    :param seed: seeds the shuffle and, through derived streams, both agents
    :param rules: ``Rules`` or ``None`` for the default rules
    :returns: a ``GameLog``; ``actions[j]`` was played in ``states[j]``

    """
    players = []
    for agent in agents:
        if all(agent is not other for other in players):
            players.append(agent)
    for player, agent in enumerate(agents):
        agent.reset(derive_seed(seed, player + 1))

    state = new_game(decks[0], decks[1], seed, rules)
    states, actions = [state], []
    while state.outcome.winner is None:
        action = int(agents[state.active_player].choose(state))
        next_state = apply_action(state, action)
        for agent in players:
            agent.observe(state, action, next_state)
        actions.append(action)
        states.append(next_state)
        state = next_state

    logger.debug("seed %d: %s won after %d actions", seed, agents[state.outcome.winner].name, len(actions))
    return GameLog(states, actions, state.outcome, seed, tuple(agent.name for agent in agents))


def _load(spec, key, base_dir):
    from cardsearch.nn import load_network

    if key not in spec:
        raise ConfigError("agent '%s' requires '%s'" % (spec.get("type"), key))
    path = spec[key]
    if base_dir is not None and not os.path.isabs(path):
        path = os.path.join(base_dir, path)
    if not os.path.exists(path):
        raise ConfigError("model file '%s' does not exist" % path)
    return load_network(path)


def make_heuristic(spec, base_dir=None):
    """
    Build a heuristic from ``{"type": "health"}`` or ``{"type": "value", "model": path}``.
    """
    if spec is None:
        return None
    kind = spec.get("type")
    if kind == "health":
        return HealthHeuristic()
    if kind == "value":
        return ValueNetworkHeuristic(_load(spec, "model", base_dir))
    raise ConfigError("unknown heuristic type '%s'" % kind)


def make_agent(spec, base_dir=None, seed=0, models=None):
    """
    Build an agent from a configuration dictionary.

    :param spec: ``{"type": ..., "name": ...}`` plus type specific keys: the ``MCTSParam`` keys
        and an optional ``heuristic`` for ``"mcts"``, ``model`` for the greedy agents
    :param base_dir: directory relative model paths are resolved against
    :param seed: initial seed
    :param models: dictionary of already loaded networks by name, consulted before the filesystem

        >>> make_agent({"type": "mcts", "iterations": 10, "exploration": 0.5}).name
        'mcts(10)'

    """
    spec = dict(spec)
    kind = spec.pop("type", None)
    name = spec.pop("name", None)
    models = models or {}

    def network(key):
        if spec.get(key) in models:
            return models[spec[key]]
        return _load(spec, key, base_dir)

    if kind == "random":
        return RandomAgent(seed=seed, name=name)
    if kind == "mcts":
        heuristic_spec = spec.pop("heuristic", None)
        param = MCTSParam.from_dict(spec)
        preloaded = (heuristic_spec or {}).get("model") in models
        if heuristic_spec is not None and heuristic_spec.get("type") == "value" and preloaded:
            heuristic = ValueNetworkHeuristic(models[heuristic_spec["model"]])
        else:
            heuristic = make_heuristic(heuristic_spec, base_dir)
        if heuristic is None and param.augment is not None and not param.augment.neutral:
            raise ConfigError("augmented search requires a 'heuristic'")
        return MCTSAgent(param, heuristic=heuristic, seed=seed, name=name)
    if kind == "greedy_value":
        return GreedyValueAgent(network("model"), seed=seed, name=name)
    if kind == "greedy_policy":
        return GreedyPolicyAgent(network("model"), window=spec.get("window", WINDOW), seed=seed, name=name)
    raise ConfigError("unknown agent type '%s'" % kind)
