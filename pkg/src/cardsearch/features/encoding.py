# -*- coding: utf-8 -*-
"""
Fixed-width vector encodings of game states and actions.

A state is encoded from the point of view of one player; that player's hand and board always come
first.  Every entry lies in ``[0, 1]``.

=======  ======  ====================================================================
offset   length  content
=======  ======  ====================================================================
0        300     my hand, one-hot card id for each of the 10 hand positions
300      28      my board, four values per slot: present, attack, health, can attack
328      28      opponent board, same layout
356      16      global values, see ``GLOBAL_FIELDS``
=======  ======  ====================================================================

Attack and health are divided by 10 and clipped.

    >>> from cardsearch.game import new_game
    >>> s = new_game(list(range(30)), list(range(30)), seed=0)
    >>> v = encode_state(s, 0)
    >>> v.shape, float(v[offset("my_hero_health")]), float(v[offset("turn")])
    ((372,), 1.0, 0.005)

..  moduleauthor:: The cardsearch developers

"""

from collections import namedtuple

import numpy as np

from cardsearch.game.actions import N_ACTIONS
from cardsearch.game.cards import BOARD_SLOTS, HAND_LIMIT, POOL_SIZE
from cardsearch.game.state import PendingKind

ENCODING_VERSION = "cardsearch-state-1"

Field = namedtuple("Field", ("name", "offset", "length"))

STAT_SCALE = 10.0
SLOT_FEATURES = ("present", "attack", "health", "can_attack")

GLOBAL_FIELDS = (
    "my_hero_health",
    "opp_hero_health",
    "my_mana_crystals",
    "my_mana_available",
    "opp_mana_crystals",
    "opp_mana_available",
    "my_deck_size",
    "opp_deck_size",
    "opp_hand_size",
    "my_hero_power_used",
    "turn",
    "my_turn",
    "pending_play_minion",
    "pending_play_spell",
    "pending_hero_power",
    "pending_attack",
)

HAND_OFFSET = 0
MY_BOARD_OFFSET = HAND_OFFSET + HAND_LIMIT * POOL_SIZE
OPP_BOARD_OFFSET = MY_BOARD_OFFSET + BOARD_SLOTS * len(SLOT_FEATURES)
GLOBAL_OFFSET = OPP_BOARD_OFFSET + BOARD_SLOTS * len(SLOT_FEATURES)
STATE_WIDTH = GLOBAL_OFFSET + len(GLOBAL_FIELDS)

SEQUENCE_WIDTH = STATE_WIDTH + N_ACTIONS

_GLOBAL = dict((name, GLOBAL_OFFSET + i) for i, name in enumerate(GLOBAL_FIELDS))

_PENDING = {
    PendingKind.PLAY_MINION: _GLOBAL["pending_play_minion"],
    PendingKind.PLAY_SPELL: _GLOBAL["pending_play_spell"],
    PendingKind.HERO_POWER: _GLOBAL["pending_hero_power"],
    PendingKind.ATTACK: _GLOBAL["pending_attack"],
}


def layout():
    """
    Return the encoding layout as a list of ``Field(name, offset, length)``.

        >>> layout()[-1]
        Field(name='globals', offset=356, length=16)

    """
    return [
        Field("my_hand", HAND_OFFSET, HAND_LIMIT * POOL_SIZE),
        Field("my_board", MY_BOARD_OFFSET, BOARD_SLOTS * len(SLOT_FEATURES)),
        Field("opp_board", OPP_BOARD_OFFSET, BOARD_SLOTS * len(SLOT_FEATURES)),
        Field("globals", GLOBAL_OFFSET, len(GLOBAL_FIELDS)),
    ]


def column_names():
    """
    One name per vector entry.

        >>> names = column_names()
        >>> len(names), names[0], names[300], names[-1]
        (372, 'my_hand_0_card_0', 'my_slot_0_present', 'pending_attack')

    """
    names = []
    for pos in range(HAND_LIMIT):
        names.extend("my_hand_%d_card_%d" % (pos, card) for card in range(POOL_SIZE))
    for side in ("my", "opp"):
        for slot in range(BOARD_SLOTS):
            names.extend("%s_slot_%d_%s" % (side, slot, f) for f in SLOT_FEATURES)
    names.extend(GLOBAL_FIELDS)
    return names


def offset(name):
    """
    Index of the global field ``name``.
    """
    return _GLOBAL[name]


def _board(v, start, board):
    for slot, m in enumerate(board):
        if m is None:
            continue
        i = start + slot * len(SLOT_FEATURES)
        v[i] = 1.0
        v[i + 1] = min(m.attack, STAT_SCALE) / STAT_SCALE
        v[i + 2] = min(m.health, STAT_SCALE) / STAT_SCALE
        v[i + 3] = 1.0 if m.can_attack else 0.0


def _encode_into(v, state, perspective):
    rules = state.rules
    me, opp = state.players[perspective], state.players[1 - perspective]

    for pos, card in enumerate(me.hand):
        v[HAND_OFFSET + pos * POOL_SIZE + card] = 1.0
    _board(v, MY_BOARD_OFFSET, me.board)
    _board(v, OPP_BOARD_OFFSET, opp.board)

    g = _GLOBAL
    v[g["my_hero_health"]] = max(me.hero_health, 0) / float(rules.hero_health)
    v[g["opp_hero_health"]] = max(opp.hero_health, 0) / float(rules.hero_health)
    v[g["my_mana_crystals"]] = me.mana_crystals / float(rules.max_mana)
    v[g["my_mana_available"]] = me.mana_available / float(rules.max_mana)
    v[g["opp_mana_crystals"]] = opp.mana_crystals / float(rules.max_mana)
    v[g["opp_mana_available"]] = opp.mana_available / float(rules.max_mana)
    v[g["my_deck_size"]] = len(me.deck) / float(rules.deck_size)
    v[g["opp_deck_size"]] = len(opp.deck) / float(rules.deck_size)
    v[g["opp_hand_size"]] = len(opp.hand) / float(rules.hand_limit)
    v[g["my_hero_power_used"]] = 1.0 if me.hero_power_used else 0.0
    v[g["turn"]] = min(state.turn, rules.turn_limit) / float(rules.turn_limit)
    v[g["my_turn"]] = 1.0 if state.active_player == perspective else 0.0
    if state.pending is not None:
        v[_PENDING[state.pending.kind]] = 1.0


def encode_state(state, perspective):
    """
    Encode ``state`` as seen by ``perspective``.

    :param state: a ``GameState``
    :param perspective: player id
    :returns: a float64 vector of length ``STATE_WIDTH``

    """
    v = np.zeros(STATE_WIDTH)
    _encode_into(v, state, perspective)
    return v


def encode_states(states, perspective):
    """
    Encode several states as the rows of one matrix.

    :param states: an iterable of ``GameState``
    :param perspective: a player id or one player id per state

    """
    states = list(states)
    if isinstance(perspective, int):
        perspective = [perspective] * len(states)
    x = np.zeros((len(states), STATE_WIDTH))
    for i, (state, p) in enumerate(zip(states, perspective)):
        _encode_into(x[i], state, p)
    return x


def action_one_hot(action):
    """
    One-hot vector of ``action``, the zero vector for ``None``.

        >>> int(action_one_hot(3).argmax()), float(action_one_hot(None).sum())
        (3, 0.0)

    """
    v = np.zeros(N_ACTIONS)
    if action is not None:
        v[action] = 1.0
    return v


WINDOW = 10


def sequence_window(states, actions, t, perspective, k=WINDOW):
    """
    The input window of decision ``t`` for the policy network.

    Row ``j`` concatenates the encoding of ``states[j]`` with the one-hot encoding of
    ``actions[j - 1]`` (zero for the first state).  The window holds rows ``t-k+1 .. t``; rows
    before the start of the game are zero.

    :param states: states of a game in order
    :param actions: ``actions[j]`` was played in ``states[j]``, at least ``t`` entries
    :param t: index of the decision
    :param perspective: player the states are encoded for
    :param k: window length

        >>> from cardsearch.game import new_game
        >>> s = new_game(list(range(30)), list(range(30)), seed=0)
        >>> w = sequence_window([s], [], 0, 0)
        >>> w.shape, float(abs(w[:9]).sum()), float(w[9, STATE_WIDTH:].sum())
        ((10, 414), 0.0, 0.0)

    """
    window = np.zeros((k, SEQUENCE_WIDTH))
    for row, j in enumerate(range(t - k + 1, t + 1)):
        if j < 0:
            continue
        _encode_into(window[row], states[j], perspective)
        if j > 0:
            window[row, STATE_WIDTH + actions[j - 1]] = 1.0
    return window
