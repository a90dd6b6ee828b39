# flake8: noqa
from .actions import N_ACTIONS, ActionKind, action_name, decode_action, encode_action
from .cards import CardDef, CardKind, Deck, Rules, SpellEffect, default_rules, load_decks, load_rules
from .state import GameState, Minion, Outcome, Pending, PendingKind, PlayerState
from .engine import (
    CardGame,
    apply_action,
    check_invariants,
    illegal_reason,
    legal_actions,
    new_game,
    playout_random,
    state_to_dict,
    swap_players,
)
