# -*- coding: utf-8 -*-
"""
Compare agents by playing them against each other.

Games are dispatched to a pool of worker processes by a ``Conductor``.  Every game gets its own seed
derived from the experiment seed and the game index, so results do not depend on the number of
workers::

    >>> from cardsearch.game import load_decks
    >>> decks = load_decks()["train"]
    >>> report = run_tournament([{"type": "random"}, {"type": "random", "name": "other"}], 4, 1, decks)
    >>> report.pairings[0]["games"], report.pairings[0]["wins"] + report.pairings[0]["losses"]
    (4, 4)

..  moduleauthor:: The cardsearch developers

"""

import datetime
import io
import json
import logging
import os
import random
import socket
from collections import OrderedDict, namedtuple
from multiprocessing import Pool

from cardsearch.agents import make_agent, play_game
from cardsearch.tools.metrics import wilson_interval
from cardsearch.tools.search_stats import pretty_dict
from cardsearch.util import canonical_json, derive_seed

GameResult = namedtuple(
    "GameResult", ("index", "seed", "decks", "agents", "winner", "actions", "turns", "stats", "log")
)


# Utility Functions


def play(index, specs, decks, seed, rules=None, models=None, record=False, base_dir=None):
    """
    Build the agents described by ``specs`` and play one game.

    :param index: game index, echoed in the result
    :param specs: agent specs for player 0 and player 1
    :param decks: ``(name, cards)`` pairs for player 0 and player 1
    :param seed: game seed
    :param rules: ``Rules`` or ``None``
    :param models: networks by name, see ``make_agent``
    :param record: keep the full ``GameLog`` in the result
    :param base_dir: directory relative model paths are resolved against
    :returns: a ``GameResult``

    """
    agents = [make_agent(spec, base_dir=base_dir, models=models) for spec in specs]
    log = play_game(agents, [cards for _, cards in decks], seed, rules)
    return GameResult(
        index=index,
        seed=seed,
        decks=tuple(name for name, _ in decks),
        agents=log.agents,
        winner=log.outcome.winner,
        actions=len(log.actions),
        turns=log.states[-1].turn,
        stats=tuple(agent.stats() for agent in agents),
        log=log if record else None,
    )


def pick_decks(seed, decks):
    """
    Draw the decks of both players for the game seeded with ``seed``.

    :param decks: a list of ``Deck`` objects or of ``(name, cards)`` pairs

    """
    rng = random.Random(seed)
    pairs = []
    for i, d in enumerate(decks):
        if hasattr(d, "cards"):
            pairs.append((d.name, tuple(d.cards)))
        else:
            pairs.append(("deck%d" % i, tuple(d)))
    return (rng.choice(pairs), rng.choice(pairs))


class Conductor(object):
    """
    Runs games in parallel and collects the results in submission order.
    """

    def __init__(self, workers=1, logger="cardsearch"):
        """
        :param workers: number of worker processes, one runs everything in this process
        :param logger: name of the logger

        """
        self.workers = max(1, int(workers))
        self.pool = Pool(processes=self.workers) if self.workers > 1 else None
        self.logger = logging.getLogger(logger)

    def __enter__(self):
        return self

    def __exit__(self, *args):
        self.close()
        return False

    def close(self):
        if self.pool is not None:
            self.pool.close()
            self.pool.join()
            self.pool = None

    def __call__(self, jobs):
        """
        Run ``jobs``, a list of ``(tag, args)`` where ``args`` are valid inputs to ``play``.

        :returns: an ordered dictionary ``tag -> GameResult``

        """
        outputs = OrderedDict()
        if self.pool is not None:
            todo = [(tag, self.pool.apply_async(play, args)) for tag, args in jobs]
            for tag, res in todo:
                outputs[tag] = res.get()
                self._log(tag, outputs[tag])
        else:
            for tag, args in jobs:
                outputs[tag] = play(*args)
                self._log(tag, outputs[tag])
        return outputs

    def _log(self, tag, result):
        self.logger.debug(
            "%s :: %s",
            tag,
            pretty_dict(OrderedDict([("seed", result.seed), ("winner", result.winner), ("actions", result.actions)])),
        )

    def log_averages(self, tags, outputs):
        """
        Log average values of all numeric agent statistics over the results tagged with ``tags``.
        """
        avg = OrderedDict()
        tags = list(tags)
        for tag in tags:
            for seat, stats in enumerate(outputs[tag].stats):
                name = outputs[tag].agents[seat]
                avg.setdefault(name, OrderedDict())
                for k, v in stats.items():
                    avg[name][k] = avg[name].get(k, 0.0) + float(v) / len(tags)
        for name, values in avg.items():
            self.logger.info("%s(avg) :: %s", name, pretty_dict(values))
        return avg


class TournamentReport(object):
    """
    Results of a round-robin tournament.
    """

    def __init__(self, agents, seed, games_per_pairing, pairings, games):
        """
        :param agents: the agent specs
        :param seed: tournament seed
        :param games_per_pairing: games per pairing
        :param pairings: one dictionary per pairing
        :param games: one dictionary per game

        """
        self.agents = agents
        self.seed = seed
        self.games_per_pairing = games_per_pairing
        self.pairings = pairings
        self.games = games

    def dict(self):
        return OrderedDict(
            [
                ("agents", self.agents),
                ("seed", self.seed),
                ("games_per_pairing", self.games_per_pairing),
                ("pairings", self.pairings),
            ]
        )

    def pairing(self, a, b):
        """
        Return the pairing of the agents with indices ``a`` and ``b``.
        """
        for p in self.pairings:
            if (p["a"], p["b"]) == (a, b):
                return p
        raise KeyError((a, b))

    def write_jsonl(self, filename):
        """
        Write one JSON object per pairing followed by one per game.
        """
        with io.open(filename, "w", encoding="utf-8", newline="\n") as fh:
            header = OrderedDict([("record", "tournament")])
            header.update(
                [("agents", self.agents), ("seed", self.seed), ("games_per_pairing", self.games_per_pairing)]
            )
            fh.write(json.dumps(header) + "\n")
            for p in self.pairings:
                fh.write(json.dumps(OrderedDict([("record", "pairing")] + list(p.items()))) + "\n")
            for g in self.games:
                fh.write(json.dumps(OrderedDict([("record", "game")] + list(g.items()))) + "\n")

    def summary(self):
        """
        Human readable table of all pairings.
        """
        width = max([len(p["name_a"]) for p in self.pairings] + [len(p["name_b"]) for p in self.pairings] + [5])
        fmt = "%%-%ds  %%-%ds  %%6s  %%6s  %%8s  %%17s" % (width, width)
        lines = [fmt % ("agent", "opponent", "games", "wins", "win rate", "95% interval")]
        for p in self.pairings:
            lines.append(
                fmt
                % (
                    p["name_a"],
                    p["name_b"],
                    p["games"],
                    p["wins"],
                    "%.3f" % p["win_rate"],
                    "[%.3f, %.3f]" % (p["wilson_low"], p["wilson_high"]),
                )
            )
        return "\n".join(lines)

    def digest(self):
        return canonical_json(self.dict())


def agent_names(specs):
    """
    Unique display names for agent specs.

        >>> agent_names([{"type": "random"}, {"type": "random"}, {"type": "mcts", "iterations": 5}])
        ['random', 'random#1', 'mcts(5)']

    """
    names = []
    for spec in specs:
        name = spec.get("name")
        if name is None:
            name = "mcts(%d)" % spec.get("iterations", 1000) if spec.get("type") == "mcts" else spec.get("type")
        base, k = name, 1
        while name in names:
            name = "%s#%d" % (base, k)
            k += 1
        names.append(name)
    return names


def run_tournament(
    specs, games_per_pairing, seed, decks, rules=None, workers=1, models=None, base_dir=None, mirrored=False
):
    """
    Play a round-robin tournament.

    Every pairing uses the same seed schedule: game ``g`` is seeded with ``derive_seed(seed, g)``,
    which also determines both decks.  The first player alternates within each pairing.  With
    ``mirrored`` set, games ``2k`` and ``2k+1`` share the seed ``derive_seed(seed, k)`` so every deal
    is played once from each seat.

    :param specs: at least two agent specs, see ``make_agent``
    :param games_per_pairing: games per pairing, at least one
    :param seed: tournament seed
    :param decks: decks to draw from
    :param rules: ``Rules`` or ``None``
    :param workers: worker processes
    :param models: networks by name
    :param base_dir: directory relative model paths are resolved against
    :param mirrored: replay every deal with the seats swapped
    :returns: a ``TournamentReport``

    """
    if len(specs) < 2:
        raise ValueError("a tournament needs at least two agents")
    if games_per_pairing < 1:
        raise ValueError("a tournament needs at least one game per pairing")

    logger = logging.getLogger(__name__)
    names = agent_names(specs)
    specs = [dict(spec, name=name) for spec, name in zip(specs, names)]

    jobs = []
    for a in range(len(specs)):
        for b in range(a + 1, len(specs)):
            for g in range(games_per_pairing):
                game_seed = derive_seed(seed, g // 2 if mirrored else g)
                first, second = (a, b) if g % 2 == 0 else (b, a)
                args = (g, (specs[first], specs[second]), pick_decks(game_seed, decks), game_seed, rules, models)
                jobs.append(((a, b, g), args + (False, base_dir)))

    with Conductor(workers, logger=__name__) as conductor:
        outputs = conductor(jobs)

    pairings, games = [], []
    for a in range(len(specs)):
        for b in range(a + 1, len(specs)):
            wins = first_wins = 0
            tags = [(a, b, g) for g in range(games_per_pairing)]
            for tag in tags:
                result = outputs[tag]
                a_seat = 0 if tag[2] % 2 == 0 else 1
                wins += result.winner == a_seat
                first_wins += result.winner == 0
                games.append(
                    OrderedDict(
                        [
                            ("a", a),
                            ("b", b),
                            ("game", tag[2]),
                            ("seed", result.seed),
                            ("players", list(result.agents)),
                            ("decks", list(result.decks)),
                            ("winner", result.winner),
                            ("actions", result.actions),
                            ("turns", result.turns),
                            ("stats", [dict(s) for s in result.stats]),
                        ]
                    )
                )
            n = games_per_pairing
            low, high = wilson_interval(wins, n)
            pairings.append(
                OrderedDict(
                    [
                        ("a", a),
                        ("b", b),
                        ("name_a", names[a]),
                        ("name_b", names[b]),
                        ("games", n),
                        ("wins", wins),
                        ("losses", n - wins),
                        ("win_rate", wins / float(n)),
                        ("wilson_low", low),
                        ("wilson_high", high),
                        ("first_player_wins", first_wins),
                    ]
                )
            )
            logger.info("%s vs %s: %d/%d", names[a], names[b], wins, n)
            conductor.log_averages(tags, outputs)

    return TournamentReport(specs, seed, games_per_pairing, pairings, games)


# Main


def setup_logging(name, verbose=False, directory=".", prefix=None):
    """
    Log everything to a file in ``directory`` named after ``prefix`` (default ``name``), the host and
    the current time, and INFO (DEBUG with ``verbose``) messages of the ``name`` logger to
    ``stderr``.  Calling it again replaces both handlers.

    :returns: the log file name without extension

    """
    hostname = socket.gethostname()
    now = datetime.datetime.today().strftime("%Y-%m-%d-%H:%M")
    log_name = "{prefix}-{hostname}-{now}".format(prefix=prefix or name, hostname=hostname, now=now)
    log_name = os.path.join(directory, log_name)

    root = logging.getLogger()
    root.setLevel(logging.DEBUG)
    for handler in list(root.handlers):
        if getattr(handler, "_cardsearch_file", False):
            root.removeHandler(handler)
            handler.close()
    log_file = logging.FileHandler(log_name + ".log")
    log_file._cardsearch_file = True
    log_file.setFormatter(
        logging.Formatter("%(levelname)5s:%(name)s:%(asctime)s: %(message)s", datefmt="%Y/%m/%d %H:%M:%S %Z")
    )
    root.addHandler(log_file)

    logger = logging.getLogger(name)
    for handler in list(logger.handlers):
        if getattr(handler, "_cardsearch_console", False):
            logger.removeHandler(handler)
    console = logging.StreamHandler()
    console._cardsearch_console = True
    console.setLevel(logging.INFO if not verbose else logging.DEBUG)
    console.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    logger.addHandler(console)

    return log_name
