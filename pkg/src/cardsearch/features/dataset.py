# -*- coding: utf-8 -*-
"""
Self-play datasets.

``generate_games`` plays seeded games between two agents.  From the game logs two kinds of
examples are built:

- state examples, one per applied action: the state after the action, encoded for player 0, labelled
  with ``1`` if player 0 won the game,
- sequence examples, one per decision of a logged player: the window of the last ten
  (state, previous action) rows, labelled with the action taken.

    >>> from cardsearch.game import load_decks
    >>> games = generate_games([{"type": "random"}, {"type": "random"}], 2, seed=5, decks=load_decks()["train"])
    >>> states = StateDataset.from_games(games)
    >>> len(states) == sum(len(g.log.actions) for g in games)
    True

..  moduleauthor:: The cardsearch developers

"""

import logging
from collections import OrderedDict, namedtuple

import numpy as np
import pandas as pd

from cardsearch.features.encoding import (
    SEQUENCE_WIDTH,
    STATE_WIDTH,
    WINDOW,
    encode_states,
    sequence_window,
)
from cardsearch.tools.compare import Conductor, pick_decks
from cardsearch.util import ShapeMismatch, derive_seed

logger = logging.getLogger(__name__)

StateRecord = namedtuple("StateRecord", ("features", "label", "turn", "game_id", "decks"))
SequenceRecord = namedtuple("SequenceRecord", ("window", "label"))


def generate_games(specs, n_games, seed, decks, rules=None, workers=1, models=None, base_dir=None):
    """
    Play ``n_games`` seeded games between the agents described by ``specs``.

    Game ``i`` is seeded with ``derive_seed(seed, i)``, which also picks both decks.  The first agent
    plays first in even games, the second in odd games.

    :param specs: two agent specs, see ``make_agent``
    :param n_games: number of games, at least one
    :param seed: dataset seed
    :param decks: decks to draw from
    :param rules: ``Rules`` or ``None``
    :param workers: worker processes
    :param models: networks by name
    :param base_dir: directory relative model paths are resolved against
    :returns: the ``GameResult`` of every game in order, logs included

    """
    if n_games < 1:
        raise ValueError("at least one game is required")
    if len(specs) != 2:
        raise ValueError("games are played between two agents, got %d" % len(specs))

    jobs = []
    for i in range(n_games):
        game_seed = derive_seed(seed, i)
        seats = (specs[0], specs[1]) if i % 2 == 0 else (specs[1], specs[0])
        jobs.append((i, (i, seats, pick_decks(game_seed, decks), game_seed, rules, models, True, base_dir)))

    with Conductor(workers, logger=__name__) as conductor:
        outputs = conductor(jobs)
        conductor.log_averages(outputs.keys(), outputs)
    games = list(outputs.values())
    logger.info("played %d games, player 0 won %d", len(games), sum(1 for g in games if g.winner == 0))
    return games


class StateDataset(object):
    """
    State examples stored column-wise.
    """

    def __init__(self, x, label, turn, game_id, deck0, deck1):
        """
        :param x: ``[n, STATE_WIDTH]`` encodings
        :param label: ``1`` if player 0 won
        :param turn: turn number of each state
        :param game_id: source game of each state
        :param deck0: deck name of player 0
        :param deck1: deck name of player 1

        """
        self.x = np.asarray(x, dtype=np.float32)
        self.label = np.asarray(label, dtype=np.int64)
        self.turn = np.asarray(turn, dtype=np.int64)
        self.game_id = np.asarray(game_id, dtype=np.int64)
        self.deck0 = np.asarray(deck0, dtype=object)
        self.deck1 = np.asarray(deck1, dtype=object)
        if self.x.ndim != 2 or self.x.shape[1] != STATE_WIDTH:
            raise ShapeMismatch("state encodings must have %d columns, got shape %s" % (STATE_WIDTH, self.x.shape))

    @classmethod
    def from_games(cls, games):
        """
        One example per applied action of every game in ``games`` (``GameResult`` objects with logs).
        """
        xs, label, turn, game_id, deck0, deck1 = [], [], [], [], [], []
        for game in games:
            states = game.log.states[1:]
            n = len(states)
            xs.append(encode_states(states, 0).astype(np.float32))
            label.extend([1 if game.winner == 0 else 0] * n)
            turn.extend(s.turn for s in states)
            game_id.extend([game.index] * n)
            deck0.extend([game.decks[0]] * n)
            deck1.extend([game.decks[1]] * n)
        x = np.concatenate(xs) if xs else np.zeros((0, STATE_WIDTH), dtype=np.float32)
        return cls(x, label, turn, game_id, deck0, deck1)

    def __len__(self):
        return len(self.label)

    def __getitem__(self, i):
        decks = (self.deck0[i], self.deck1[i])
        return StateRecord(self.x[i], int(self.label[i]), int(self.turn[i]), int(self.game_id[i]), decks)

    def frame(self):
        """
        Return the examples as a ``pandas.DataFrame`` with one column per encoding entry followed by
        the metadata columns ``game_id``, ``turn``, ``deck_pair`` and ``label``.
        """
        from cardsearch.features.encoding import column_names

        df = pd.DataFrame(self.x, columns=column_names())
        df["game_id"] = self.game_id
        df["turn"] = self.turn
        df["deck_pair"] = ["%s|%s" % pair for pair in zip(self.deck0, self.deck1)]
        df["label"] = self.label
        return df

    @classmethod
    def from_frame(cls, df):
        from cardsearch.features.encoding import column_names

        names = column_names()
        missing = [c for c in names + ["game_id", "turn", "deck_pair", "label"] if c not in df.columns]
        if missing:
            raise ShapeMismatch("dataset lacks %d columns, e.g. %s" % (len(missing), missing[:5]))
        pairs = [str(p).split("|", 1) for p in df["deck_pair"]]
        return cls(
            df[names].to_numpy(dtype=np.float32),
            df["label"].to_numpy(),
            df["turn"].to_numpy(),
            df["game_id"].to_numpy(),
            [p[0] for p in pairs],
            [p[1] if len(p) > 1 else "" for p in pairs],
        )

    def split_by_game(self, fraction, seed=0):
        """
        Split into two datasets whose games are disjoint, the first holding about ``fraction`` of the
        games.
        """
        games = np.unique(self.game_id)
        rng = np.random.default_rng(seed)
        first = set(rng.permutation(games)[: int(round(fraction * len(games)))].tolist())
        mask = np.array([g in first for g in self.game_id], dtype=bool)
        return self.subset(mask), self.subset(~mask)

    def subset(self, mask):
        return StateDataset(
            self.x[mask], self.label[mask], self.turn[mask], self.game_id[mask], self.deck0[mask], self.deck1[mask]
        )


class SequenceWindows(object):
    """
    Policy network inputs gathered on demand from shared rows.

    Rows are stored once per (game, logged player); window ``i`` ends at row ``index[i, 0]`` and
    does not reach before ``index[i, 1]``, the first row of its game.
    """

    def __init__(self, rows, index, window=WINDOW):
        self.rows = rows
        self.index = index
        self.window = window

    def __len__(self):
        return len(self.index)

    def __getitem__(self, idx):
        idx = np.atleast_1d(idx)
        k = self.window
        out = np.zeros((len(idx), k, SEQUENCE_WIDTH))
        for n, i in enumerate(idx):
            row, start = self.index[i]
            lo = max(start, row - k + 1)
            out[n, k - (row - lo + 1) :] = self.rows[lo : row + 1]
        return out


class SequenceDataset(object):
    """
    Sequence examples of a policy network.
    """

    def __init__(self, rows, index, labels, window=WINDOW):
        """
        :param rows: ``[m, SEQUENCE_WIDTH]`` (state, previous action) rows
        :param index: ``[n, 2]`` last row and first game row of every window
        :param labels: ``[n]`` action taken at the last row

        """
        self.rows = np.asarray(rows, dtype=np.float32).reshape(-1, SEQUENCE_WIDTH)
        self.index = np.asarray(index, dtype=np.int64).reshape(-1, 2)
        self.labels = np.asarray(labels, dtype=np.int64)
        self.window = window
        self.windows = SequenceWindows(self.rows, self.index, window)

    @classmethod
    def from_games(cls, games, players=(0, 1), window=WINDOW):
        """
        Sequence examples for the decisions of ``players`` in every game of ``games``.
        """
        blocks, index, labels = [], [], []
        offset = 0
        for game in games:
            states, actions = game.log.states, game.log.actions
            for p in players:
                decisions = [t for t in range(len(actions)) if states[t].active_player == p]
                if not decisions:
                    continue
                last = decisions[-1]
                block = np.zeros((last + 1, SEQUENCE_WIDTH), dtype=np.float32)
                block[:, :STATE_WIDTH] = encode_states(states[: last + 1], p)
                for j in range(1, last + 1):
                    block[j, STATE_WIDTH + actions[j - 1]] = 1.0
                blocks.append(block)
                index.extend((offset + t, offset) for t in decisions)
                labels.extend(actions[t] for t in decisions)
                offset += last + 1
        rows = np.concatenate(blocks) if blocks else np.zeros((0, SEQUENCE_WIDTH), dtype=np.float32)
        return cls(rows, index, labels, window)

    def __len__(self):
        return len(self.labels)

    def __getitem__(self, i):
        return SequenceRecord(self.windows[i][0], int(self.labels[i]))


def build_sequences(log, players=(0, 1), window=WINDOW):
    """
    Sequence examples of one game log.

    :param log: a ``GameLog``
    :param players: players whose decisions are logged
    :param window: rows per window
    :returns: a list of ``SequenceRecord``

    """
    records = []
    for t, state in enumerate(log.states[:-1]):
        if state.active_player in players:
            window_ = sequence_window(log.states, log.actions, t, state.active_player, window)
            records.append(SequenceRecord(window_, log.actions[t]))
    return records


def dataset_summary(states):
    """
    Characteristics of a state dataset: games, examples, decks, share of player 0 wins and the
    lowest and highest win rate of any deck.

    :param states: a ``StateDataset``

    """
    df = pd.DataFrame(
        {"game_id": states.game_id, "deck0": states.deck0, "deck1": states.deck1, "label": states.label}
    )
    games = df.groupby("game_id", sort=True).first()
    per_deck = pd.concat(
        [
            pd.DataFrame({"deck": games["deck0"], "won": games["label"]}),
            pd.DataFrame({"deck": games["deck1"], "won": 1 - games["label"]}),
        ]
    )
    rates = per_deck.groupby("deck")["won"].mean()

    summary = OrderedDict()
    summary["games"] = int(len(games))
    summary["examples"] = int(len(df))
    summary["decks"] = int(len(rates))
    summary["player0_wins"] = float(100.0 * games["label"].mean()) if len(games) else 0.0
    summary["min_deck_win_rate"] = float(100.0 * rates.min()) if len(rates) else 0.0
    summary["max_deck_win_rate"] = float(100.0 * rates.max()) if len(rates) else 0.0
    return summary
