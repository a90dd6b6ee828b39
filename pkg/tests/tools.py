# -*- coding: utf-8 -*-

import random

from cardsearch.game import Minion, Pending, apply_action, legal_actions, new_game
from cardsearch.game.state import empty_board

DECK = list(range(30))
MIRROR = list(range(4, 19)) * 2


def start(seed=0, deck0=DECK, deck1=DECK):
    return new_game(list(deck0), list(deck1), seed)


def minion(card_id, attack, health, can_attack=True):
    return Minion(card_id=card_id, attack=attack, health=health, can_attack=can_attack)


def board(*minions):
    """
    A seven slot board holding ``minions`` in the leftmost slots.
    """
    b = list(empty_board())
    for i, m in enumerate(minions):
        b[i] = m
    return tuple(b)


def make_state(me=None, opp=None, active=0, turn=5, pending=None, seed=0):
    """
    A running game with some fields of the active player (``me``) and of the opponent (``opp``)
    replaced.
    """
    s = start(seed)
    players = list(s.players)
    players[active] = players[active]._replace(**(me or {}))
    players[1 - active] = players[1 - active]._replace(**(opp or {}))
    if pending is not None:
        pending = Pending(*pending)
    return s._replace(players=tuple(players), active_player=active, turn=turn, pending=pending)


def random_trace(seed, deck0=DECK, deck1=DECK):
    """
    States and actions of a uniformly random game.
    """
    rng = random.Random(seed)
    s = start(seed, deck0, deck1)
    states, actions = [s], []
    while s.outcome.winner is None:
        a = rng.choice(legal_actions(s))
        s = apply_action(s, a)
        actions.append(a)
        states.append(s)
    return states, actions
