# -*- coding: utf-8 -*-
"""
Playout throughput and rules soundness.

..  moduleauthor:: The cardsearch developers

"""

import logging
import random
from collections import OrderedDict
from time import time

from cardsearch.game.cards import load_decks
from cardsearch.game.engine import apply_action, check_invariants, legal_actions, new_game
from cardsearch.game.state import Outcome
from cardsearch.util import CardSearchError, derive_seed

logger = logging.getLogger(__name__)


def _deck_pair(rng, decks):
    return rng.choice(decks).cards, rng.choice(decks).cards


def bench_playouts(n, seed=0, decks=None, rules=None):
    """
    Return the number of actions played and the wall time of ``n`` random playouts.

    :param n: number of playouts
    :param seed: seeds deck choices, shuffles and actions
    :param decks: deck list, the packaged training decks by default
    :returns: actions, wall time

        >>> actions, t = bench_playouts(2)
        >>> actions > 0
        True

    """
    decks = decks or load_decks(rules=rules)["train"]
    actions = 0
    t = time()
    for i in range(n):
        rng = random.Random(derive_seed(seed, i))
        deck0, deck1 = _deck_pair(rng, decks)
        state = new_game(deck0, deck1, derive_seed(seed, i), rules)
        while state.outcome == Outcome.IN_PROGRESS:
            state = apply_action(state, rng.choice(legal_actions(state)), validate=False)
            actions += 1
    return actions, time() - t


def soundness(n, seed=0, decks=None, rules=None, check_all=False):
    """
    Play ``n`` random games and count rule violations.

    Every state is checked with ``check_invariants``; every played action is validated.  With
    ``check_all`` every legal action of every state is applied.  Games that exceed the turn limit
    are counted as violations.

    :param n: number of playouts
    :param seed: seeds deck choices, shuffles and actions
    :param decks: deck list, the packaged training decks by default
    :param check_all: apply every member of ``legal_actions``, not just the played one
    :returns: an ordered dictionary of counters

        >>> r = soundness(3, check_all=True)
        >>> r["games"], r["illegal"], r["invariants"], r["turn_limit"]
        (3, 0, 0, 0)

    """
    decks = decks or load_decks(rules=rules)["train"]
    counts = OrderedDict(
        [
            ("games", 0),
            ("actions", 0),
            ("illegal", 0),
            ("invariants", 0),
            ("turn_limit", 0),
            ("max_turn", 0),
            ("player0_wins", 0),
            ("walltime", 0.0),
        ]
    )
    t = time()
    for i in range(n):
        rng = random.Random(derive_seed(seed, i))
        deck0, deck1 = _deck_pair(rng, decks)
        state = new_game(deck0, deck1, derive_seed(seed, i), rules)
        limit = state.rules.turn_limit
        while state.outcome == Outcome.IN_PROGRESS:
            try:
                check_invariants(state)
            except CardSearchError as e:
                counts["invariants"] += 1
                logger.warning("game %d: %s", i, e)
            actions = legal_actions(state)
            if len(set(actions)) != len(actions) or not actions:
                counts["illegal"] += 1
                logger.warning("game %d turn %d: bad action list %s", i, state.turn, actions)
                if not actions:
                    break
            if check_all:
                for action in actions:
                    try:
                        apply_action(state, action)
                    except CardSearchError as e:
                        counts["illegal"] += 1
                        logger.warning("game %d: %s", i, e)
            try:
                state = apply_action(state, rng.choice(actions))
            except CardSearchError as e:
                counts["illegal"] += 1
                logger.warning("game %d: %s", i, e)
                break
            counts["actions"] += 1
            if state.turn > limit:
                counts["turn_limit"] += 1
                logger.warning("game %d exceeds %d turns", i, limit)
                break
        try:
            check_invariants(state)
        except CardSearchError as e:
            counts["invariants"] += 1
            logger.warning("game %d: %s", i, e)
        counts["games"] += 1
        counts["max_turn"] = max(counts["max_turn"], state.turn)
        counts["player0_wins"] += state.outcome == Outcome.PLAYER0_WINS
    counts["walltime"] = time() - t
    return counts
