# -*- coding: utf-8 -*-
"""
Card pool, rule constants and deck lists.

Rules live in a JSON file with a ``rules_version`` string, a ``constants`` record and exactly 30
cards with ids ``0..29``::

    >>> from cardsearch.game.cards import default_rules
    >>> rules = default_rules()
    >>> rules.rules_version
    'cardsearch-rules-1'
    >>> rules.card(26)
    CardDef(id=26, name='Firebolt', mana_cost=2, kind=<CardKind.SPELL: 1>, attack=0, health=0, effect=<SpellEffect.DEAL_DAMAGE: 0>, amount=3)
    >>> rules.card(4).attack, rules.card(4).health
    (3, 2)

..  moduleauthor:: The cardsearch developers

"""

import json
import os
from collections import Counter, OrderedDict, namedtuple
from enum import IntEnum

from cardsearch.util import ConfigError, InvalidDeck

DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data")
DEFAULT_RULES = os.path.join(DATA_DIR, "rules.json")
DEFAULT_DECKS = os.path.join(DATA_DIR, "decks.json")

POOL_SIZE = 30

# the action enumeration is built around these
BOARD_SLOTS = 7
HAND_LIMIT = 10


class CardKind(IntEnum):
    MINION = 0
    SPELL = 1


class SpellEffect(IntEnum):
    DEAL_DAMAGE = 0
    HEAL = 1
    DRAW_CARDS = 2
    BUFF_ATTACK = 3


CardDef = namedtuple("CardDef", ("id", "name", "mana_cost", "kind", "attack", "health", "effect", "amount"))

Deck = namedtuple("Deck", ("name", "cards"))


class Rules(object):
    """
    Immutable rule set: constants plus the card pool.
    """

    CONSTANTS = (
        "hero_health",
        "max_mana",
        "board_slots",
        "hand_limit",
        "deck_size",
        "max_copies",
        "hero_power_cost",
        "hero_power_damage",
        "opening_hand",
        "turn_limit",
    )

    def __init__(self, rules_version, constants, cards):
        """
        :param rules_version: version string embedded in every exported dataset
        :param constants: dictionary with the keys in ``Rules.CONSTANTS``
        :param cards: sequence of ``CardDef`` ordered by id

        """
        missing = [k for k in Rules.CONSTANTS if k not in constants]
        if missing:
            raise ConfigError("rules are missing constants %s" % ", ".join(missing))

        self.rules_version = str(rules_version)
        self.hero_health = int(constants["hero_health"])
        self.max_mana = int(constants["max_mana"])
        self.board_slots = int(constants["board_slots"])
        self.hand_limit = int(constants["hand_limit"])
        self.deck_size = int(constants["deck_size"])
        self.max_copies = int(constants["max_copies"])
        self.hero_power_cost = int(constants["hero_power_cost"])
        self.hero_power_damage = int(constants["hero_power_damage"])
        self.opening_hand = tuple(int(n) for n in constants["opening_hand"])
        self.turn_limit = int(constants["turn_limit"])
        self.cards = tuple(cards)

        if self.board_slots != BOARD_SLOTS or self.hand_limit != HAND_LIMIT:
            raise ConfigError(
                "board slots and hand limit are fixed to %d and %d" % (BOARD_SLOTS, HAND_LIMIT)
            )
        if len(self.opening_hand) != 2:
            raise ConfigError("opening_hand needs one entry per player")
        if not 1 <= self.max_mana <= 10:
            raise ConfigError("max_mana must be in 1..10")

        if len(self.cards) != POOL_SIZE:
            raise ConfigError("card pool must have exactly %d cards, got %d" % (POOL_SIZE, len(self.cards)))
        for i, card in enumerate(self.cards):
            if card.id != i:
                raise ConfigError("card ids must be contiguous 0..%d, got %d at %d" % (POOL_SIZE - 1, card.id, i))
            if not 0 <= card.mana_cost <= 10:
                raise ConfigError("card %d: cost %d out of range" % (card.id, card.mana_cost))
            if card.kind == CardKind.MINION:
                if card.effect is not None or card.attack < 0 or card.health < 1:
                    raise ConfigError("card %d: malformed minion" % card.id)
            elif card.effect is None or card.attack or card.health or card.amount < 1:
                raise ConfigError("card %d: malformed spell" % card.id)

    def card(self, card_id):
        """
        Return the ``CardDef`` with id ``card_id``.
        """
        return self.cards[card_id]

    def dict(self):
        """
        Return a JSON-compatible description of these rules.
        """
        constants = OrderedDict((k, getattr(self, k)) for k in Rules.CONSTANTS)
        constants["opening_hand"] = list(self.opening_hand)
        cards = []
        for card in self.cards:
            d = OrderedDict([("id", card.id), ("name", card.name), ("cost", card.mana_cost)])
            if card.kind == CardKind.MINION:
                d["kind"] = "minion"
                d["attack"] = card.attack
                d["health"] = card.health
            else:
                d["kind"] = "spell"
                d["effect"] = card.effect.name.lower()
                d["amount"] = card.amount
            cards.append(d)
        return OrderedDict([("rules_version", self.rules_version), ("constants", constants), ("cards", cards)])

    def __eq__(self, other):
        if not isinstance(other, Rules):
            return NotImplemented
        return self.dict() == other.dict()

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash((self.rules_version, self.cards))

    def __repr__(self):
        return "<Rules %s>" % self.rules_version


def _parse_card(d):
    try:
        kind = d["kind"].lower()
        if kind == "minion":
            return CardDef(int(d["id"]), str(d["name"]), int(d["cost"]), CardKind.MINION,
                           int(d["attack"]), int(d["health"]), None, 0)
        elif kind == "spell":
            effect = SpellEffect[str(d["effect"]).upper()]
            return CardDef(int(d["id"]), str(d["name"]), int(d["cost"]), CardKind.SPELL,
                           0, 0, effect, int(d["amount"]))
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError("malformed card entry %r: %s" % (d, e))
    raise ConfigError("unknown card kind %r" % d.get("kind"))


def rules_from_dict(d):
    """
    Build ``Rules`` from a decoded JSON object.

    :param d: a dictionary with keys ``rules_version``, ``constants`` and ``cards``

    """
    for key in ("rules_version", "constants", "cards"):
        if key not in d:
            raise ConfigError("rules file lacks '%s'" % key)
    cards = sorted((_parse_card(c) for c in d["cards"]), key=lambda c: c.id)
    return Rules(d["rules_version"], d["constants"], cards)


def load_rules(filename=None):
    """
    Load rules from ``filename`` or the packaged default rules.

    :param filename: path to a rules JSON file or ``None``

    """
    if filename is None or filename == "default":
        return default_rules()
    return _load_rules_file(filename)


def _load_rules_file(filename):
    try:
        with open(filename) as fh:
            d = json.load(fh)
    except (IOError, OSError) as e:
        raise ConfigError("cannot read rules file '%s': %s" % (filename, e))
    except ValueError as e:
        raise ConfigError("rules file '%s' is not valid JSON: %s" % (filename, e))
    return rules_from_dict(d)


_DEFAULT_RULES = []


def default_rules():
    """
    Return the packaged rules, loaded once.

        >>> default_rules() is default_rules()
        True

    """
    if not _DEFAULT_RULES:
        _DEFAULT_RULES.append(_load_rules_file(DEFAULT_RULES))
    return _DEFAULT_RULES[0]


def validate_deck(cards, rules=None):
    """
    Check that ``cards`` is a legal deck and return it as a tuple.

    :param cards: sequence of card ids
    :param rules: ``Rules`` or ``None`` for the default rules

        >>> validate_deck([0] * 30)
        Traceback (most recent call last):
        ...
        cardsearch.util.InvalidDeck: card 0 appears 30 times, at most 2 allowed

    """
    rules = rules or default_rules()
    cards = tuple(int(c) for c in cards)
    if len(cards) != rules.deck_size:
        raise InvalidDeck("deck has %d cards, need %d" % (len(cards), rules.deck_size))
    for card_id, count in sorted(Counter(cards).items()):
        if not 0 <= card_id < len(rules.cards):
            raise InvalidDeck("unknown card id %d" % card_id)
        if count > rules.max_copies:
            raise InvalidDeck("card %d appears %d times, at most %d allowed" % (card_id, count, rules.max_copies))
    return cards


def _parse_deck(d, rules):
    try:
        name = str(d["name"])
        cards = d["cards"]
    except (KeyError, TypeError):
        raise ConfigError("deck entries need 'name' and 'cards', got %r" % (d,))
    if isinstance(cards, dict):
        expanded = []
        for card_id, count in sorted(cards.items(), key=lambda kv: int(kv[0])):
            expanded.extend([int(card_id)] * int(count))
        cards = expanded
    try:
        return Deck(name, tuple(sorted(validate_deck(cards, rules))))
    except InvalidDeck as e:
        raise ConfigError("deck '%s': %s" % (name, e))


def load_decks(filename=None, rules=None):
    """
    Load the train and test deck lists.

    :param filename: path to a deck JSON file or ``None`` for the packaged lists
    :param rules: rules to validate against
    :returns: dictionary with keys ``"train"`` and ``"test"`` mapping to lists of ``Deck``

        >>> decks = load_decks()
        >>> len(decks["train"]), len(decks["test"])
        (9, 6)
        >>> decks["train"][0].name, len(decks["train"][0].cards)
        ('D1', 30)

    """
    rules = rules or default_rules()
    if filename is None or filename == "default":
        filename = DEFAULT_DECKS
    try:
        with open(filename) as fh:
            d = json.load(fh)
    except (IOError, OSError) as e:
        raise ConfigError("cannot read deck file '%s': %s" % (filename, e))
    except ValueError as e:
        raise ConfigError("deck file '%s' is not valid JSON: %s" % (filename, e))

    decks = OrderedDict()
    for key in ("train", "test"):
        decks[key] = [_parse_deck(entry, rules) for entry in d.get(key, [])]
    if not decks["train"]:
        raise ConfigError("deck file '%s' has no train decks" % filename)
    return decks
