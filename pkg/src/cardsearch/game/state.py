# -*- coding: utf-8 -*-
"""
Game state value types.

All types are named tuples; hands, decks and boards are tuples.  A board always has exactly seven
slots, empty slots hold ``None``.  The top of a deck is ``deck[0]``.

..  moduleauthor:: The cardsearch developers

"""

from collections import namedtuple
from enum import IntEnum


class Outcome(IntEnum):
    IN_PROGRESS = 0
    PLAYER0_WINS = 1
    PLAYER1_WINS = 2

    @property
    def winner(self):
        """
        The winning player or ``None``.

            >>> Outcome.PLAYER1_WINS.winner
            1
            >>> Outcome.IN_PROGRESS.winner is None
            True

        """
        if self == Outcome.IN_PROGRESS:
            return None
        return int(self) - 1

    @staticmethod
    def won_by(player):
        return Outcome.PLAYER0_WINS if player == 0 else Outcome.PLAYER1_WINS


class PendingKind(IntEnum):
    PLAY_MINION = 0
    PLAY_SPELL = 1
    HERO_POWER = 2
    ATTACK = 3


# ``source`` is a hand position for cards, a board slot for attacks and 0 for the hero power.
Pending = namedtuple("Pending", ("kind", "source"))

Minion = namedtuple("Minion", ("card_id", "attack", "health", "can_attack"))

PlayerState = namedtuple(
    "PlayerState",
    (
        "hero_health",
        "mana_crystals",
        "mana_available",
        "hand",
        "deck",
        "board",
        "fatigue",
        "hero_power_used",
    ),
)

GameState = namedtuple(
    "GameState", ("players", "active_player", "turn", "pending", "rng_state", "outcome", "rules")
)


def empty_board(slots=7):
    """
    Return a board with ``slots`` empty slots.

        >>> empty_board()
        (None, None, None, None, None, None, None)

    """
    return (None,) * slots


def board_count(board):
    """
    Number of minions on ``board``.
    """
    return sum(1 for m in board if m is not None)
