# -*- coding: utf-8 -*-
"""
One-ply greedy move selection with trained networks.

..  moduleauthor:: The cardsearch developers

"""

import numpy as np

from cardsearch.algorithms.heuristics import ValueNetworkHeuristic
from cardsearch.features.encoding import SEQUENCE_WIDTH
from cardsearch.util import EncodingMismatch


def greedy_value_choose(state, network, game=None):
    """
    Return the legal action whose successor the value network rates best for the player to move,
    ties go to the lowest action index.  Finished successors are scored with their true outcome.

    :param state: a running game state
    :param network: a value ``Network`` over state encodings
    :param game: game adapter, defaults to the card game
    :raises EncodingMismatch: if the network input width differs from the state encoding width

    """
    heuristic = ValueNetworkHeuristic(network, game)
    actions = list(heuristic.game.legal_actions(state))
    values = heuristic.evaluate_actions(state, actions)
    return actions[int(np.argmax(values))]


def greedy_policy_choose(window, network, actions):
    """
    Return the most probable legal action under the policy network.

    :param window: a ``[K, SEQUENCE_WIDTH]`` array of (state, previous action) rows
    :param network: a policy ``Network``
    :param actions: legal actions
    :returns: ``(action, raw)`` where ``raw`` is the unmasked argmax, which may be illegal

        >>> from cardsearch.nn import policy_network
        >>> net = policy_network(hidden=4, seed=0)
        >>> net.params[:] = 0
        >>> greedy_policy_choose(np.zeros((10, SEQUENCE_WIDTH)), net, [3, 5])
        (3, 0)

    """
    if network.input_width != SEQUENCE_WIDTH:
        raise EncodingMismatch(
            "policy network expects %d inputs but sequence rows have %d" % (network.input_width, SEQUENCE_WIDTH)
        )
    probabilities = network.forward(window[np.newaxis])[0]
    raw = int(np.argmax(probabilities))
    actions = sorted(actions)
    best = actions[int(np.argmax(probabilities[actions]))]
    return best, raw
