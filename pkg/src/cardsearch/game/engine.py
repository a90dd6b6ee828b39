# -*- coding: utf-8 -*-
"""
Rules engine.

A game is started with :func:`new_game`, moves are listed by :func:`legal_actions` and applied by
:func:`apply_action`, which returns a new state and never modifies its input::

    >>> from cardsearch.game.engine import new_game, legal_actions, apply_action
    >>> from cardsearch.game.actions import END_TURN
    >>> s = new_game(list(range(30)), list(range(30)), seed=0)
    >>> len(s.players[0].hand), len(s.players[1].hand), s.players[0].mana_crystals
    (3, 4, 1)
    >>> t = apply_action(s, END_TURN)
    >>> t.active_player, t.turn, t.players[1].mana_crystals, len(t.players[1].hand)
    (1, 2, 1, 5)
    >>> s.active_player
    0

Moves that need a target or a board slot are split into two actions: the first selects the card,
hero power or attacker and leaves a pending choice, the second completes it.  Mana is paid when the
move completes.

..  moduleauthor:: The cardsearch developers

"""

from collections import OrderedDict

from cardsearch.game.actions import (
    ATTACK_OFFSET,
    END_TURN,
    ENEMY_HERO,
    HAND_OFFSET,
    HERO_POWER,
    N_ACTIONS,
    OWN_HERO,
    SLOT_OFFSET,
    TARGET_OFFSET,
    ActionKind,
    decode_action,
)
from cardsearch.game.cards import CardKind, SpellEffect, default_rules, validate_deck
from cardsearch.game.state import (
    GameState,
    Minion,
    Outcome,
    Pending,
    PendingKind,
    PlayerState,
    board_count,
    empty_board,
)
from cardsearch.util import GameOver, IllegalAction, InvariantError, SplitMix64

_KIND = tuple(decode_action(a).kind for a in range(N_ACTIONS))
_ARG = tuple(decode_action(a).arg for a in range(N_ACTIONS))


def new_game(deck0, deck1, seed, rules=None):
    """
    Start a new game.

    Both decks are shuffled by one ``SplitMix64`` generator seeded with ``seed``, first ``deck0``
    then ``deck1``.  Player 0 draws the first opening hand (3 cards) and starts with one mana
    crystal, player 1 draws 4 cards.

    :param deck0: 30 card ids for player 0
    :param deck1: 30 card ids for player 1
    :param seed: 64-bit integer
    :param rules: ``Rules`` or ``None`` for the default rules
    :returns: a ``GameState``

    """
    rules = rules or default_rules()
    decks = [list(validate_deck(deck0, rules)), list(validate_deck(deck1, rules))]
    rng = SplitMix64(seed)
    for deck in decks:
        rng.shuffle(deck)

    players = []
    for player, deck in enumerate(decks):
        n = rules.opening_hand[player]
        crystals = 1 if player == 0 else 0
        players.append(
            PlayerState(
                hero_health=rules.hero_health,
                mana_crystals=crystals,
                mana_available=crystals,
                hand=tuple(deck[:n]),
                deck=tuple(deck[n:]),
                board=empty_board(rules.board_slots),
                fatigue=0,
                hero_power_used=False,
            )
        )
    return GameState(
        players=tuple(players),
        active_player=0,
        turn=1,
        pending=None,
        rng_state=rng.state,
        outcome=Outcome.IN_PROGRESS,
        rules=rules,
    )


# Legality


def _card_playable(card, mana, has_free_slot, has_minion):
    if card.mana_cost > mana:
        return False
    if card.kind == CardKind.MINION:
        return has_free_slot
    if card.effect == SpellEffect.BUFF_ATTACK:
        return has_minion
    return True


def _own_minion_targets(player):
    return [TARGET_OFFSET + 1 + i for i, m in enumerate(player.board) if m is not None]


def _enemy_minion_targets(player):
    return [TARGET_OFFSET + 9 + i for i, m in enumerate(player.board) if m is not None]


def _completions(state, me, opp):
    pending = state.pending
    if pending.kind == PendingKind.PLAY_MINION:
        return [SLOT_OFFSET + i for i, m in enumerate(me.board) if m is None]
    if pending.kind == PendingKind.ATTACK:
        return [TARGET_OFFSET + ENEMY_HERO] + _enemy_minion_targets(opp)
    if pending.kind == PendingKind.PLAY_SPELL:
        card = state.rules.cards[me.hand[pending.source]]
        if card.effect == SpellEffect.BUFF_ATTACK:
            return _own_minion_targets(me)
    return (
        [TARGET_OFFSET + OWN_HERO]
        + _own_minion_targets(me)
        + [TARGET_OFFSET + ENEMY_HERO]
        + _enemy_minion_targets(opp)
    )


def legal_actions(state):
    """
    Return the legal actions in ``state`` in ascending order.

    :param state: a ``GameState`` that is still in progress
    :raises GameOver: if the game has ended

    """
    if state.outcome != Outcome.IN_PROGRESS:
        raise GameOver("no moves in a finished game (%s)" % state.outcome.name)

    me = state.players[state.active_player]
    opp = state.players[1 - state.active_player]

    if state.pending is not None:
        return _completions(state, me, opp)

    rules = state.rules
    actions = [END_TURN]
    if not me.hero_power_used and me.mana_available >= rules.hero_power_cost:
        actions.append(HERO_POWER)

    has_free_slot = None in me.board
    has_minion = board_count(me.board) > 0
    for pos, card_id in enumerate(me.hand):
        if _card_playable(rules.cards[card_id], me.mana_available, has_free_slot, has_minion):
            actions.append(HAND_OFFSET + pos)

    for slot, m in enumerate(me.board):
        if m is not None and m.can_attack and m.attack > 0:
            actions.append(ATTACK_OFFSET + slot)
    return actions


def _target_reason(state, me, opp, target):
    pending = state.pending
    own_minion = 1 <= target <= 7
    enemy_minion = target >= 9
    if own_minion and me.board[target - 1] is None:
        return "empty-target-slot"
    if enemy_minion and opp.board[target - 9] is None:
        return "empty-target-slot"
    if pending.kind == PendingKind.ATTACK and target < ENEMY_HERO:
        return "invalid-target"
    if pending.kind == PendingKind.PLAY_SPELL:
        card = state.rules.cards[me.hand[pending.source]]
        if card.effect == SpellEffect.BUFF_ATTACK and not own_minion:
            return "invalid-target"
    return None


def illegal_reason(state, action):
    """
    Return ``None`` if ``action`` is legal in ``state`` and a short reason code otherwise.

    :param state: a ``GameState``
    :param action: an action index

        >>> from cardsearch.game.engine import new_game, illegal_reason
        >>> s = new_game(list(range(30)), list(range(30)), seed=0)
        >>> illegal_reason(s, 0) is None
        True
        >>> illegal_reason(s, 1)
        'insufficient-mana'
        >>> illegal_reason(s, 12)
        'no-pending-choice'

    """
    if state.outcome != Outcome.IN_PROGRESS:
        return "game-over"
    if not isinstance(action, int) or not 0 <= action < N_ACTIONS:
        return "unknown-action"

    rules = state.rules
    me = state.players[state.active_player]
    opp = state.players[1 - state.active_player]
    kind, arg = _KIND[action], _ARG[action]

    if state.pending is not None:
        if kind == ActionKind.SELECT_BOARD_SLOT:
            if state.pending.kind != PendingKind.PLAY_MINION:
                return "unexpected-slot"
            if me.board[arg] is not None:
                return "slot-occupied"
            return None
        if kind == ActionKind.SELECT_TARGET:
            if state.pending.kind == PendingKind.PLAY_MINION:
                return "unexpected-target"
            return _target_reason(state, me, opp, arg)
        return "pending-choice"

    if kind in (ActionKind.SELECT_BOARD_SLOT, ActionKind.SELECT_TARGET):
        return "no-pending-choice"
    if kind == ActionKind.END_TURN:
        return None
    if kind == ActionKind.HERO_POWER:
        if me.hero_power_used:
            return "hero-power-used"
        if me.mana_available < rules.hero_power_cost:
            return "insufficient-mana"
        return None
    if kind == ActionKind.SELECT_HAND_CARD:
        if arg >= len(me.hand):
            return "empty-hand-position"
        card = rules.cards[me.hand[arg]]
        if card.mana_cost > me.mana_available:
            return "insufficient-mana"
        if card.kind == CardKind.MINION and None not in me.board:
            return "board-full"
        if card.effect == SpellEffect.BUFF_ATTACK and board_count(me.board) == 0:
            return "no-friendly-minion"
        return None
    # ATTACK_WITH
    m = me.board[arg]
    if m is None:
        return "empty-slot"
    if not m.can_attack:
        return "cannot-attack"
    if m.attack <= 0:
        return "no-attack"
    return None


# Transitions


def _draw(player, rules):
    if player.deck:
        hand = player.hand
        if len(hand) < rules.hand_limit:
            hand = hand + (player.deck[0],)
        # a full hand burns the drawn card
        return player._replace(hand=hand, deck=player.deck[1:])
    fatigue = player.fatigue + 1
    return player._replace(fatigue=fatigue, hero_health=player.hero_health - fatigue)


def _pay(player, pos, card):
    hand = player.hand[:pos] + player.hand[pos + 1 :]
    return player._replace(hand=hand, mana_available=player.mana_available - card.mana_cost)


def _locate(active, target):
    """
    Map a relative target to ``(owner, slot)``, ``slot`` is ``None`` for heroes.
    """
    if target == OWN_HERO:
        return active, None
    if target < ENEMY_HERO:
        return active, target - 1
    if target == ENEMY_HERO:
        return 1 - active, None
    return 1 - active, target - 9


def _set_minion(player, slot, minion):
    board = list(player.board)
    board[slot] = minion if minion is not None and minion.health > 0 else None
    return player._replace(board=tuple(board))


def _damage(players, active, target, amount):
    owner, slot = _locate(active, target)
    p = players[owner]
    if slot is None:
        players[owner] = p._replace(hero_health=p.hero_health - amount)
    else:
        m = p.board[slot]
        players[owner] = _set_minion(p, slot, m._replace(health=m.health - amount))


def _heal(players, active, target, amount, rules):
    owner, slot = _locate(active, target)
    p = players[owner]
    if slot is None:
        players[owner] = p._replace(hero_health=min(rules.hero_health, p.hero_health + amount))
    else:
        m = p.board[slot]
        cap = rules.cards[m.card_id].health
        players[owner] = _set_minion(p, slot, m._replace(health=min(cap, m.health + amount)))


def _buff(players, active, target, amount):
    owner, slot = _locate(active, target)
    m = players[owner].board[slot]
    players[owner] = _set_minion(players[owner], slot, m._replace(attack=m.attack + amount))


def _finish(state, players):
    h0 = players[0].hero_health
    h1 = players[1].hero_health
    if h0 <= 0 and h1 <= 0:
        outcome = Outcome.won_by(state.active_player)
    elif h0 <= 0:
        outcome = Outcome.PLAYER1_WINS
    elif h1 <= 0:
        outcome = Outcome.PLAYER0_WINS
    else:
        outcome = Outcome.IN_PROGRESS
    return state._replace(players=tuple(players), pending=None, outcome=outcome)


def _end_turn(state):
    rules = state.rules
    nxt = 1 - state.active_player
    players = list(state.players)
    p = players[nxt]
    crystals = min(p.mana_crystals + 1, rules.max_mana)
    board = tuple(m if m is None or m.can_attack else m._replace(can_attack=True) for m in p.board)
    p = p._replace(mana_crystals=crystals, mana_available=crystals, hero_power_used=False, board=board)
    players[nxt] = _draw(p, rules)
    return _finish(state._replace(active_player=nxt, turn=state.turn + 1), players)


def _resolve_target(state, target):
    rules = state.rules
    active = state.active_player
    players = list(state.players)
    me = players[active]
    pending = state.pending

    if pending.kind == PendingKind.HERO_POWER:
        players[active] = me._replace(
            mana_available=me.mana_available - rules.hero_power_cost, hero_power_used=True
        )
        _damage(players, active, target, rules.hero_power_damage)

    elif pending.kind == PendingKind.PLAY_SPELL:
        card = rules.cards[me.hand[pending.source]]
        players[active] = _pay(me, pending.source, card)
        if card.effect == SpellEffect.DEAL_DAMAGE:
            _damage(players, active, target, card.amount)
        elif card.effect == SpellEffect.HEAL:
            _heal(players, active, target, card.amount, rules)
        else:
            _buff(players, active, target, card.amount)

    else:
        slot = pending.source
        attacker = me.board[slot]._replace(can_attack=False)
        if target == ENEMY_HERO:
            players[active] = _set_minion(me, slot, attacker)
            _damage(players, active, target, attacker.attack)
        else:
            # simultaneous damage
            opp = players[1 - active]
            defender = opp.board[target - 9]
            players[active] = _set_minion(me, slot, attacker._replace(health=attacker.health - defender.attack))
            players[1 - active] = _set_minion(
                opp, target - 9, defender._replace(health=defender.health - attacker.attack)
            )

    return _finish(state, players)


def _apply(state, action):
    kind = _KIND[action]

    if kind == ActionKind.END_TURN:
        return _end_turn(state)
    if kind == ActionKind.HERO_POWER:
        return state._replace(pending=Pending(PendingKind.HERO_POWER, 0))
    if kind == ActionKind.ATTACK_WITH:
        return state._replace(pending=Pending(PendingKind.ATTACK, action - ATTACK_OFFSET))
    if kind == ActionKind.SELECT_TARGET:
        return _resolve_target(state, action - TARGET_OFFSET)

    rules = state.rules
    active = state.active_player
    me = state.players[active]

    if kind == ActionKind.SELECT_HAND_CARD:
        pos = action - HAND_OFFSET
        card = rules.cards[me.hand[pos]]
        if card.kind == CardKind.MINION:
            return state._replace(pending=Pending(PendingKind.PLAY_MINION, pos))
        if card.effect != SpellEffect.DRAW_CARDS:
            return state._replace(pending=Pending(PendingKind.PLAY_SPELL, pos))
        me = _pay(me, pos, card)
        for _ in range(card.amount):
            me = _draw(me, rules)
        players = list(state.players)
        players[active] = me
        return _finish(state, players)

    # SELECT_BOARD_SLOT
    pos = state.pending.source
    card = rules.cards[me.hand[pos]]
    me = _pay(me, pos, card)
    minion = Minion(card_id=card.id, attack=card.attack, health=card.health, can_attack=False)
    players = list(state.players)
    players[active] = _set_minion(me, action - SLOT_OFFSET, minion)
    return _finish(state, players)


def apply_action(state, action, validate=True):
    """
    Return the successor of ``state`` under ``action``.

    :param state: a ``GameState``
    :param action: an action index
    :param validate: check legality first; callers that draw ``action`` from ``legal_actions``
        may skip the check
    :raises IllegalAction: if ``action`` is not legal, ``reason`` names the violated rule

        >>> from cardsearch.game.engine import new_game, apply_action
        >>> s = new_game(list(range(30)), list(range(30)), seed=0)
        >>> apply_action(s, 19)
        Traceback (most recent call last):
        ...
        cardsearch.util.IllegalAction: action 19 is illegal: no-pending-choice

    """
    if validate:
        reason = illegal_reason(state, action)
        if reason is not None:
            raise IllegalAction(reason, action)
    return _apply(state, action)


def playout_random(state, rng):
    """
    Play uniformly random legal actions until the game ends.

    :param state: a ``GameState``
    :param rng: a ``random.Random`` instance
    :returns: the final ``Outcome``

        >>> import random
        >>> from cardsearch.game.engine import new_game, playout_random
        >>> s = new_game(list(range(30)), list(range(30)), seed=1)
        >>> playout_random(s, random.Random(1)) == playout_random(s, random.Random(1))
        True

    """
    while state.outcome == Outcome.IN_PROGRESS:
        state = _apply(state, rng.choice(legal_actions(state)))
    return state.outcome


def winner(state):
    """
    Return the winning player or ``None`` while the game is running.
    """
    return state.outcome.winner


def swap_players(state):
    """
    Return ``state`` with the roles of the two players exchanged.

        >>> from cardsearch.game.engine import new_game, swap_players
        >>> s = new_game(list(range(30)), list(range(30)), seed=0)
        >>> t = swap_players(s)
        >>> t.active_player, t.players[1] == s.players[0]
        (1, True)
        >>> swap_players(t) == s
        True

    """
    outcome = state.outcome
    if outcome != Outcome.IN_PROGRESS:
        outcome = Outcome.won_by(1 - outcome.winner)
    return state._replace(
        players=(state.players[1], state.players[0]),
        active_player=1 - state.active_player,
        outcome=outcome,
    )


def check_invariants(state):
    """
    Raise ``InvariantError`` if ``state`` violates a structural invariant of the rules.

    :param state: a ``GameState``

    """
    rules = state.rules

    def fail(msg):
        raise InvariantError("turn %d: %s" % (state.turn, msg))

    for i, p in enumerate(state.players):
        if not 0 <= p.mana_available <= p.mana_crystals <= rules.max_mana:
            fail("player %d mana %d/%d" % (i, p.mana_available, p.mana_crystals))
        if len(p.hand) > rules.hand_limit:
            fail("player %d holds %d cards" % (i, len(p.hand)))
        if len(p.board) != rules.board_slots:
            fail("player %d board has %d slots" % (i, len(p.board)))
        if p.hero_health > rules.hero_health:
            fail("player %d hero health %d" % (i, p.hero_health))
        if p.fatigue < 0:
            fail("player %d fatigue %d" % (i, p.fatigue))
        for m in p.board:
            if m is None:
                continue
            if m.health < 1:
                fail("player %d keeps a dead minion" % i)
            if m.health > rules.cards[m.card_id].health:
                fail("player %d minion %d has health %d" % (i, m.card_id, m.health))
            if m.attack < rules.cards[m.card_id].attack:
                fail("player %d minion %d lost attack" % (i, m.card_id))
        for card_id in p.hand + p.deck:
            if not 0 <= card_id < len(rules.cards):
                fail("player %d holds unknown card %d" % (i, card_id))

    dead = [p.hero_health <= 0 for p in state.players]
    if (state.outcome == Outcome.IN_PROGRESS) == any(dead):
        fail("outcome %s with hero health %s" % (state.outcome.name, [p.hero_health for p in state.players]))
    if state.outcome != Outcome.IN_PROGRESS and state.pending is not None:
        fail("pending choice in a finished game")
    if state.pending is not None:
        me = state.players[state.active_player]
        kind, source = state.pending
        if kind in (PendingKind.PLAY_MINION, PendingKind.PLAY_SPELL) and source >= len(me.hand):
            fail("pending card position %d beyond hand" % source)
        if kind == PendingKind.ATTACK and me.board[source] is None:
            fail("pending attacker slot %d is empty" % source)


def _minion_dict(m):
    if m is None:
        return None
    return OrderedDict(
        [("card_id", m.card_id), ("attack", m.attack), ("health", m.health), ("can_attack", m.can_attack)]
    )


def state_to_dict(state):
    """
    Return a JSON-compatible description of ``state`` (deck contents are reduced to counts).

        >>> from cardsearch.game.engine import new_game, state_to_dict
        >>> d = state_to_dict(new_game(list(range(30)), list(range(30)), seed=0))
        >>> d["players"][0]["hand_size"], d["players"][0]["board"].count(None), d["players"][1]["deck_size"]
        (3, 7, 26)

    """
    players = []
    for p in state.players:
        players.append(
            OrderedDict(
                [
                    ("hero_health", p.hero_health),
                    ("mana_crystals", p.mana_crystals),
                    ("mana_available", p.mana_available),
                    ("hand", list(p.hand)),
                    ("hand_size", len(p.hand)),
                    ("deck_size", len(p.deck)),
                    ("board", [_minion_dict(m) for m in p.board]),
                    ("fatigue", p.fatigue),
                    ("hero_power_used", p.hero_power_used),
                ]
            )
        )
    pending = None
    if state.pending is not None:
        pending = OrderedDict([("kind", state.pending.kind.name.lower()), ("source", state.pending.source)])
    return OrderedDict(
        [
            ("players", players),
            ("active_player", state.active_player),
            ("turn", state.turn),
            ("pending", pending),
            ("outcome", state.outcome.name.lower()),
        ]
    )


class CardGame(object):
    """
    Adapter exposing the engine to the search code.

    The search only needs ``legal_actions``, ``apply_action``, ``to_move``, ``is_terminal`` and
    ``reward``; small test games implement the same methods.
    """

    def legal_actions(self, state):
        return legal_actions(state)

    def apply_action(self, state, action):
        return _apply(state, action)

    def to_move(self, state):
        return state.active_player

    def is_terminal(self, state):
        return state.outcome != Outcome.IN_PROGRESS

    def reward(self, state, player):
        """
        Return 1.0 if ``player`` won the finished game ``state`` and 0.0 otherwise.
        """
        return 1.0 if state.outcome.winner == player else 0.0
