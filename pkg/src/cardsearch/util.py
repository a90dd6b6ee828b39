# -*- coding: utf-8 -*-
"""
Errors and seeded random streams shared by all modules.

..  moduleauthor:: The cardsearch developers

"""

import hashlib
import json

MASK64 = (1 << 64) - 1


class CardSearchError(Exception):
    """
    Base class of all errors raised by this package.
    """

    pass


class ConfigError(CardSearchError, ValueError):
    pass


class InvalidDeck(CardSearchError, ValueError):
    pass


class GameOver(CardSearchError):
    """
    Raised when asking for moves in a finished game.
    """

    pass


class IllegalAction(CardSearchError, ValueError):
    """
    Raised when an action is applied to a state in which it is not legal.

    The attribute ``reason`` holds a short machine readable code such as ``"insufficient-mana"``.

        >>> e = IllegalAction("board-full", action=12)
        >>> e.reason
        'board-full'
        >>> str(e)
        'action 12 is illegal: board-full'

    """

    def __init__(self, reason, action=None):
        self.reason = reason
        self.action = action
        CardSearchError.__init__(self, "action %s is illegal: %s" % (action, reason))


class InvariantError(CardSearchError):
    pass


class EmptyNode(CardSearchError):
    pass


class EncodingMismatch(CardSearchError, ValueError):
    pass


class ShapeMismatch(CardSearchError, ValueError):
    pass


class DegenerateLabels(CardSearchError, ValueError):
    pass


class DivergedLoss(CardSearchError, ArithmeticError):
    """
    Raised when training produces a non-finite loss.  The attribute ``diagnostics`` is a dictionary
    with the epoch, batch and last finite loss.
    """

    def __init__(self, message, diagnostics=None):
        self.diagnostics = dict(diagnostics or {})
        CardSearchError.__init__(self, message)


class SplitMix64(object):
    """
    A 64-bit splitmix generator.  Deck shuffles are driven by this generator so that they can be
    reproduced by hand in any language.

        >>> g = SplitMix64(0)
        >>> hex(g.next())
        '0xe220a8397b1dcdaf'

    The state is an integer and can be stored and restored::

        >>> g = SplitMix64(1337); _ = g.next()
        >>> h = SplitMix64(0); h.state = g.state
        >>> g.next() == h.next()
        True

    """

    def __init__(self, seed):
        self.state = int(seed) & MASK64

    def next(self):
        """
        Return the next 64-bit output.
        """
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    __next__ = next

    def __iter__(self):
        return self

    def below(self, bound):
        """
        Return ``next() % bound``.

        :param bound: an integer ≥ 1

        """
        return self.next() % bound

    def shuffle(self, items):
        """
        Fisher-Yates shuffle ``items`` in place, walking from the last position down::

            for i in n-1, ..., 1:
                j = next() mod (i+1)
                swap items[i] and items[j]

        :param items: a list
        :returns: ``items``

            >>> SplitMix64(1).shuffle(list(range(5))) == SplitMix64(1).shuffle(list(range(5)))
            True

        """
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items


def derive_seed(seed, *streams):
    """
    Derive a 64-bit seed for a sub-stream, e.g. game ``i`` of an experiment seeded with ``seed``.

    :param seed: parent seed
    :param streams: integers naming the stream

        >>> derive_seed(1, 0) == derive_seed(1, 0)
        True
        >>> derive_seed(1, 0) != derive_seed(1, 1)
        True
        >>> 0 <= derive_seed(7, 3, 1) < 2**64
        True

    """
    g = SplitMix64(seed)
    for stream in streams:
        g = SplitMix64(g.next() ^ (int(stream) & MASK64))
    return g.next()


def canonical_json(obj):
    """
    Return ``obj`` as JSON with sorted keys and no insignificant whitespace.

        >>> canonical_json({"b": 1, "a": [1, 2]})
        '{"a":[1,2],"b":1}'

    """
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def sha256_hex(data):
    """
    Return the hex SHA-256 digest of ``data`` (bytes or text).

        >>> sha256_hex("")[:16]
        'e3b0c44298fc1c14'

    """
    if not isinstance(data, bytes):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


def sha256_file(filename, blocksize=1 << 16):
    """
    Return the hex SHA-256 digest of the file ``filename``.
    """
    h = hashlib.sha256()
    with open(filename, "rb") as fh:
        for block in iter(lambda: fh.read(blocksize), b""):
            h.update(block)
    return h.hexdigest()
