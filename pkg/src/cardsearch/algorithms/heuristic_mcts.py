# -*- coding: utf-8 -*-
"""
UCT search augmented by a heuristic evaluation function.

    >>> from cardsearch.game import new_game
    >>> from cardsearch.algorithms.mcts import MCTS, MCTSParam
    >>> from cardsearch.algorithms.heuristics import AugmentParam, HealthHeuristic
    >>> s = new_game(list(range(30)), list(range(30)), seed=0)
    >>> augment = AugmentParam(bias_weight=1.0, move_ordering=True, cutoff_probability=0.1)
    >>> search = HeuristicMCTS(heuristic=HealthHeuristic(), augment=augment)
    >>> a = search(s, MCTSParam(iterations=30, seed=2, augment=augment))
    >>> search.root.visits
    30

With every augmentation switched off the search makes the same random draws as plain ``MCTS``.

..  moduleauthor:: The cardsearch developers

"""

from cardsearch.algorithms.heuristics import AugmentParam, EpsilonGreedy, order_moves, progressive_bias_score, simulate
from cardsearch.algorithms.mcts import MCTS


class HeuristicMCTS(MCTS):
    """
    ``MCTS`` with progressive bias, move ordering, biased simulations and early cutoff.
    """

    def __init__(self, game=None, heuristic=None, augment=None):
        """
        :param game: game adapter, defaults to the heuristic's game or the card game
        :param heuristic: a ``Heuristic``, required unless ``augment`` is neutral
        :param augment: an ``AugmentParam``

        """
        if game is None and heuristic is not None:
            game = heuristic.game
        MCTS.__init__(self, game)
        self.augment = AugmentParam() if augment is None else augment
        if heuristic is None and not self.augment.neutral:
            raise ValueError("augmentation %r requires a heuristic" % (self.augment,))
        self.heuristic = heuristic

    def expansion_order(self, node):
        actions = list(node.edges)
        if not self.augment.uses_priors:
            return actions
        values = self.heuristic.evaluate_actions(node.state, actions)
        for a, v in zip(actions, values):
            node.edges[a].prior = v
        if self.augment.move_ordering:
            return order_moves(node.state, actions, self.heuristic, values)
        return actions

    def score(self, node, action, edge):
        w = self.augment.bias_weight
        if not w:
            return MCTS.score(self, node, action, edge)
        return progressive_bias_score(edge.q, node.visits, edge.n, self.param.exploration, edge.prior, w)

    def simulate(self, state, root_player, rng):
        augment = self.augment
        mode = augment.simulation
        if isinstance(mode, EpsilonGreedy) and mode.epsilon == 0.0:
            mode = None
        if mode is None and not augment.cutoff_probability:
            return MCTS.simulate(self, state, root_player, rng)
        return simulate(
            state,
            root_player,
            self.heuristic,
            rng,
            mode=mode,
            cutoff_probability=augment.cutoff_probability,
        )
