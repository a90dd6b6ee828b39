# -*- coding: utf-8 -*-
"""
The fixed global action enumeration.

Actions are plain integers ``0..41``:

=====  =====================  ==========================================
index  kind                   argument
=====  =====================  ==========================================
0      ``END_TURN``
1      ``HERO_POWER``
2-11   ``SELECT_HAND_CARD``   hand position 0..9
12-18  ``SELECT_BOARD_SLOT``  board slot 0..6
19-34  ``SELECT_TARGET``      target 0..15
35-41  ``ATTACK_WITH``        board slot 0..6
=====  =====================  ==========================================

Targets are relative to the player to move: ``0`` is the own hero, ``1..7`` the own board slots
``0..6``, ``8`` the enemy hero and ``9..15`` the enemy board slots ``0..6``.

    >>> decode_action(20)
    DecodedAction(kind=<ActionKind.SELECT_TARGET: 4>, arg=1)
    >>> encode_action(ActionKind.ATTACK_WITH, 6)
    41
    >>> action_name(27)
    'SelectTarget(8)'

"""

from collections import namedtuple
from enum import IntEnum

END_TURN = 0
HERO_POWER = 1
HAND_OFFSET = 2
SLOT_OFFSET = 12
TARGET_OFFSET = 19
ATTACK_OFFSET = 35
N_ACTIONS = 42

OWN_HERO = 0
ENEMY_HERO = 8
N_TARGETS = 16


class ActionKind(IntEnum):
    END_TURN = 0
    HERO_POWER = 1
    SELECT_HAND_CARD = 2
    SELECT_BOARD_SLOT = 3
    SELECT_TARGET = 4
    ATTACK_WITH = 5


DecodedAction = namedtuple("DecodedAction", ("kind", "arg"))

_OFFSETS = {
    ActionKind.END_TURN: (END_TURN, 1),
    ActionKind.HERO_POWER: (HERO_POWER, 1),
    ActionKind.SELECT_HAND_CARD: (HAND_OFFSET, 10),
    ActionKind.SELECT_BOARD_SLOT: (SLOT_OFFSET, 7),
    ActionKind.SELECT_TARGET: (TARGET_OFFSET, N_TARGETS),
    ActionKind.ATTACK_WITH: (ATTACK_OFFSET, 7),
}

_NAMES = {
    ActionKind.END_TURN: "EndTurn",
    ActionKind.HERO_POWER: "UseHeroPower",
    ActionKind.SELECT_HAND_CARD: "SelectHandCard",
    ActionKind.SELECT_BOARD_SLOT: "SelectBoardSlot",
    ActionKind.SELECT_TARGET: "SelectTarget",
    ActionKind.ATTACK_WITH: "AttackWith",
}


def _build_table():
    table = []
    for kind in ActionKind:
        offset, count = _OFFSETS[kind]
        for arg in range(count):
            table.append(DecodedAction(kind, arg if count > 1 else None))
    return tuple(table)


_DECODED = _build_table()


def decode_action(index):
    """
    Return the ``DecodedAction`` for ``index``.

    :param index: integer in ``0..41``

        >>> decode_action(0)
        DecodedAction(kind=<ActionKind.END_TURN: 0>, arg=None)
        >>> decode_action(42)
        Traceback (most recent call last):
        ...
        ValueError: action index 42 out of range 0..41

    """
    if not 0 <= index < N_ACTIONS:
        raise ValueError("action index %s out of range 0..%d" % (index, N_ACTIONS - 1))
    return _DECODED[index]


def encode_action(kind, arg=None):
    """
    Return the index of the action ``kind`` with argument ``arg``.

        >>> encode_action(ActionKind.SELECT_HAND_CARD, 0)
        2

    """
    offset, count = _OFFSETS[ActionKind(kind)]
    if count == 1:
        return offset
    if arg is None or not 0 <= arg < count:
        raise ValueError("argument %s out of range for %s" % (arg, ActionKind(kind).name))
    return offset + arg


def action_name(index):
    """
    Return a readable name such as ``'AttackWith(0)'``.
    """
    kind, arg = decode_action(index)
    if arg is None:
        return _NAMES[kind]
    return "%s(%d)" % (_NAMES[kind], arg)
