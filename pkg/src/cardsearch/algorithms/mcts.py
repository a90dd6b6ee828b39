# -*- coding: utf-8 -*-
"""
Monte Carlo Tree Search with the UCT selection rule.

Each iteration selects a path through fully expanded nodes, adds exactly one child, runs a uniformly
random playout from it and propagates the result back to the root.  The statistics of an edge are
kept from the point of view of the player to move at its parent, so both players maximise their own
score during selection.

    >>> from cardsearch.game import new_game
    >>> s = new_game(list(range(30)), list(range(30)), seed=0)
    >>> mcts = MCTS()
    >>> a = mcts(s, MCTSParam(iterations=50, seed=1))
    >>> mcts.root.visits, mcts.simulations
    (50, 50)

The search is game agnostic: any object providing ``legal_actions``, ``apply_action``, ``to_move``,
``is_terminal`` and ``reward`` can be searched (see :class:`cardsearch.game.engine.CardGame`).

..  moduleauthor:: The cardsearch developers

"""

import random
from collections import OrderedDict, namedtuple
from math import log, sqrt

from cardsearch.game.engine import CardGame
from cardsearch.tools.search_stats import Tracer, normalize_tracer
from cardsearch.util import ConfigError, EmptyNode

RolloutResult = namedtuple("RolloutResult", ("value", "steps"))

FINAL_RULES = ("robust", "max")


class MCTSParam(object):
    """
    Parameters of a search.

        >>> MCTSParam(iterations=100).dict()["exploration"]
        1.4142135623730951

    """

    def __init__(self, iterations=1000, exploration=sqrt(2), seed=0, final="robust", augment=None, verbose=False):
        """
        :param iterations: number of iterations (and playouts) per decision
        :param exploration: the constant weighting the exploration term of UCT
        :param seed: seed of the rollout generator used when no generator is passed in
        :param final: ``"robust"`` picks the most visited root action, ``"max"`` the best average
        :param augment: an ``AugmentParam`` or ``None``
        :param verbose: log a summary of every search

        """
        if int(iterations) < 1:
            raise ConfigError("iterations must be at least 1 but got %s" % iterations)
        if float(exploration) < 0:
            raise ConfigError("exploration constant must be non-negative but got %s" % exploration)
        if final not in FINAL_RULES:
            raise ConfigError("final rule must be one of %s but got '%s'" % (FINAL_RULES, final))
        self.iterations = int(iterations)
        self.exploration = float(exploration)
        self.seed = int(seed)
        self.final = final
        self.augment = augment
        self.verbose = bool(verbose)

    def dict(self):
        d = OrderedDict()
        d["iterations"] = self.iterations
        d["exploration"] = self.exploration
        d["seed"] = self.seed
        d["final"] = self.final
        d["augment"] = None if self.augment is None else self.augment.dict()
        return d

    @classmethod
    def from_dict(cls, d):
        """
        Construct parameters from a configuration dictionary.

            >>> p = MCTSParam.from_dict({"iterations": 10, "augment": {"move_ordering": True}})
            >>> p.iterations, p.augment.move_ordering
            (10, True)

        """
        from cardsearch.algorithms.heuristics import AugmentParam

        d = dict(d)
        unknown = set(d) - {"iterations", "exploration", "seed", "final", "augment", "verbose"}
        if unknown:
            raise ConfigError("unknown search parameters %s" % sorted(unknown))
        augment = d.pop("augment", None)
        if augment is not None and not isinstance(augment, AugmentParam):
            augment = AugmentParam.from_dict(augment)
        return cls(augment=augment, **d)

    def __repr__(self):
        return "<MCTSParam(%s)>" % ", ".join("%s=%s" % (k, v) for k, v in self.dict().items())

    def __eq__(self, other):
        return isinstance(other, MCTSParam) and self.dict() == other.dict()

    def __ne__(self, other):
        return not self == other

    __hash__ = None


class Edge(object):
    """
    Statistics of one action at a node.
    """

    __slots__ = ("n", "total", "prior", "child")

    def __init__(self, n=0, total=0.0, prior=0.0, child=None):
        self.n = n
        self.total = total
        self.prior = prior
        self.child = child

    @property
    def q(self):
        """
        Average score, ``0.0`` while unvisited.
        """
        return self.total / self.n if self.n else 0.0

    @property
    def expanded(self):
        return self.child is not None

    def __repr__(self):
        return "<Edge(n=%d, q=%.4f, prior=%.4f)>" % (self.n, self.q, self.prior)


class SearchNode(object):
    """
    A node of the search tree.

    ``visits`` counts the iterations that passed through this node to one of its children, so
    ``visits == sum(e.n for e in edges.values())`` holds after every back-propagation.  ``untried``
    lists the actions not yet expanded, in expansion order.
    """

    __slots__ = ("state", "to_move", "terminal", "edges", "untried", "visits")

    def __init__(self, state, to_move, actions=(), terminal=False):
        self.state = state
        self.to_move = to_move
        self.terminal = terminal
        self.edges = OrderedDict((a, Edge()) for a in actions)
        self.untried = list(actions)
        self.visits = 0

    @property
    def fully_expanded(self):
        return not self.untried

    def statistics(self):
        """
        Return ``{action: (N(s,a), Q(s,a))}``.
        """
        return OrderedDict((a, (e.n, e.q)) for a, e in self.edges.items())

    def __repr__(self):
        return "<SearchNode(to_move=%s, visits=%d, edges=%d, untried=%d)>" % (
            self.to_move,
            self.visits,
            len(self.edges),
            len(self.untried),
        )


def uct_score(q, n_s, n_sa, c):
    """
    The UCT score ``q + c·sqrt(ln n_s / n_sa)``.

    :param q: average score of the action
    :param n_s: visits of the node
    :param n_sa: visits of the action, at least one
    :param c: exploration constant

        >>> round(uct_score(0.4, 100, 10, 1.414), 3), round(uct_score(0.6, 100, 90, 1.414), 3)
        (1.36, 0.92)

    """
    return q + c * sqrt(log(n_s) / n_sa)


def uct_select(node, c, score=None):
    """
    Return the action maximising the selection score at ``node``.

    Unvisited actions come first, the lowest index among them wins.  Otherwise the highest score
    wins, ties are broken by the lowest action index.

    :param node: a ``SearchNode``
    :param c: exploration constant
    :param score: callable ``score(node, action, edge)``, defaults to ``uct_score``
    :raises EmptyNode: if ``node`` has no actions

        >>> node = SearchNode(None, 0, actions=(0, 1))
        >>> node.edges[0].n, node.edges[0].total = 90, 54.0
        >>> node.edges[1].n, node.edges[1].total = 10, 4.0
        >>> node.visits = 100
        >>> uct_select(node, 1.414), uct_select(node, 0.0)
        (1, 0)

    """
    if not node.edges:
        raise EmptyNode("node without actions: %r" % (node,))

    best, best_score = None, None
    for a in sorted(node.edges):
        e = node.edges[a]
        if e.n == 0:
            return a
        v = uct_score(e.q, node.visits, e.n, c) if score is None else score(node, a, e)
        if best_score is None or v > best_score:
            best, best_score = a, v
    return best


def best_action(node, final="robust"):
    """
    Return the action played after the search.

    :param node: the root ``SearchNode``
    :param final: ``"robust"`` for the most visited action, ``"max"`` for the highest average score
        among visited actions; ties go to the lowest index

    """
    if not node.edges:
        raise EmptyNode("node without actions: %r" % (node,))
    best, best_key = None, None
    for a in sorted(node.edges):
        e = node.edges[a]
        if final == "robust":
            key = e.n
        else:
            if e.n == 0:
                continue
            key = e.q
        if best_key is None or key > best_key:
            best, best_key = a, key
    if best is None:
        best = min(node.edges)
    return best


class MCTS(object):
    """
    Plain UCT search.

    Subclasses change the search by overriding ``expansion_order``, ``score`` and ``simulate``.
    """

    def __init__(self, game=None):
        """
        :param game: game adapter, defaults to the card game

        """
        self.game = CardGame() if game is None else game
        self.param = None
        self.root = None
        self.simulations = 0
        self.trace = None

    def new_node(self, state):
        """
        Create a node for ``state``, its actions listed in expansion order.
        """
        game = self.game
        if game.is_terminal(state):
            return SearchNode(state, game.to_move(state), terminal=True)
        node = SearchNode(state, game.to_move(state), actions=game.legal_actions(state))
        node.untried = self.expansion_order(node)
        return node

    def expansion_order(self, node):
        return list(node.edges)

    def score(self, node, action, edge):
        return uct_score(edge.q, node.visits, edge.n, self.param.exploration)

    def select(self, node):
        return uct_select(node, self.param.exploration, self.score)

    def simulate(self, state, root_player, rng):
        """
        Play uniformly random moves from ``state`` to the end of the game.

        :returns: a ``RolloutResult`` holding the score of ``root_player`` and the number of moves

        """
        game = self.game
        steps = 0
        while not game.is_terminal(state):
            state = game.apply_action(state, rng.choice(game.legal_actions(state)))
            steps += 1
        return RolloutResult(game.reward(state, root_player), steps)

    def iteration(self, root, rng, tracer):
        """
        Run one selection, expansion, simulation and back-propagation step from ``root``.
        """
        node, path = root, []
        while not node.terminal and node.fully_expanded:
            a = self.select(node)
            path.append((node, a))
            node = node.edges[a].child

        if not node.terminal:
            a = node.untried.pop(0)
            child = self.new_node(self.game.apply_action(node.state, a))
            node.edges[a].child = child
            path.append((node, a))
            node = child

        if node.terminal:
            result = RolloutResult(self.game.reward(node.state, root.to_move), 0)
        else:
            result = self.simulate(node.state, root.to_move, rng)
        self.simulations += 1
        tracer.record("rollout", result.steps)

        r = result.value
        for parent, a in path:
            e = parent.edges[a]
            parent.visits += 1
            e.n += 1
            e.total += r if parent.to_move == root.to_move else 1.0 - r

    def search(self, state, rng=None, tracer=None):
        """
        Build a fresh tree for ``state`` and run ``param.iterations`` iterations on it.
        """
        if rng is None:
            rng = random.Random(self.param.seed)
        tracer = normalize_tracer(False) if tracer is None else tracer
        self.root = self.new_node(state)
        self.simulations = 0
        if self.root.terminal:
            raise EmptyNode("cannot search from a finished game")
        for _ in range(self.param.iterations):
            self.iteration(self.root, rng, tracer)
        return self.root

    def __call__(self, state, param, rng=None, tracer=False):
        """
        Search from ``state`` and return the chosen action.

        :param state: a non-terminal game state
        :param param: an ``MCTSParam``
        :param rng: a ``random.Random`` instance, defaults to one seeded with ``param.seed``
        :param tracer: see ``normalize_tracer`` for accepted values

        """
        self.param = param
        tracer = normalize_tracer(tracer)
        if not isinstance(tracer, Tracer):
            tracer = tracer(self, root_label="mcts", verbosity=param.verbose, start_clocks=True, max_depth=2)

        with tracer.context("search"):
            self.search(state, rng, tracer)
            tracer.record("iterations", param.iterations)
            tracer.record("simulations", self.simulations)

        tracer.exit()
        try:
            self.trace = tracer.trace
        except AttributeError:
            self.trace = None
        return best_action(self.root, param.final)


def search_for(param, game=None, heuristic=None):
    """
    Return the search object implementing ``param``: plain ``MCTS`` or ``HeuristicMCTS`` when an
    augmentation is configured.
    """
    if param.augment is None:
        return MCTS(game)
    from cardsearch.algorithms.heuristic_mcts import HeuristicMCTS

    return HeuristicMCTS(game, heuristic=heuristic, augment=param.augment)


def mcts_iteration(root, param, rng, game=None, heuristic=None):
    """
    Run one iteration on an existing tree.

    :param root: a ``SearchNode`` built by ``MCTS.new_node``
    :param param: an ``MCTSParam``
    :param rng: a ``random.Random`` instance

        >>> from cardsearch.game import new_game
        >>> search = MCTS()
        >>> root = search.new_node(new_game(list(range(30)), list(range(30)), seed=0))
        >>> rng = random.Random(0)
        >>> for _ in range(len(root.edges)): mcts_iteration(root, MCTSParam(), rng)
        >>> set(e.n for e in root.edges.values())
        {1}

    """
    search = search_for(param, game, heuristic)
    search.param = param
    search.iteration(root, rng, normalize_tracer(False))


def mcts_choose(state, param, game=None, rng=None, heuristic=None, tracer=False):
    """
    Search from ``state`` and return the chosen action.

    :param state: a non-terminal game state
    :param param: an ``MCTSParam``
    :param game: game adapter, defaults to the card game
    :param rng: a ``random.Random`` instance, defaults to one seeded with ``param.seed``
    :param heuristic: a ``Heuristic`` required by non-neutral augmentations
    :param tracer: see ``normalize_tracer`` for accepted values

    """
    return search_for(param, game, heuristic)(state, param, rng=rng, tracer=tracer)
