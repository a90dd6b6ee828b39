# -*- coding: utf-8 -*-
"""
Experiment configuration files.

An experiment is described by one JSON object::

    {
      "seed": 1,
      "rules": "default",
      "decks": "default",
      "workers": 2,
      "output": "out",
      "generate": {"agents": [{"type": "random"}, {"type": "random"}], "games": 10, "log_mode": "both"},
      "train": {"model": "value", "hidden": [128, 64], "param": {"epochs": 5}},
      "experiment": {"tournament": {"agents": [...], "games_per_pairing": 10}}
    }

``seed`` is mandatory.  ``rules`` and ``decks`` are paths relative to the configuration file or
``"default"`` for the packaged files; both must exist when the configuration is loaded.

    >>> config = ExperimentConfig({"seed": 3})
    >>> config.seed, config.rules.rules_version, len(config.decks["train"])
    (3, 'cardsearch-rules-1', 9)
    >>> ExperimentConfig({})
    Traceback (most recent call last):
    ...
    cardsearch.util.ConfigError: configuration lacks the mandatory 'seed'

..  moduleauthor:: The cardsearch developers

"""

import io
import json
import os
from collections import OrderedDict

from cardsearch.features.export import LOG_MODES
from cardsearch.game.cards import load_decks, load_rules
from cardsearch.nn.train import TrainParam
from cardsearch.util import ConfigError, canonical_json, sha256_hex

KEYS = ("seed", "rules", "decks", "workers", "output", "generate", "train", "experiment")
EXPERIMENTS = ("generality", "curriculum", "tournament")


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


class ExperimentConfig(object):
    """
    A validated experiment configuration.
    """

    def __init__(self, d, base_dir=".", filename=None):
        """
        :param d: the parsed JSON object
        :param base_dir: directory relative paths are resolved against
        :param filename: file the configuration was read from, for messages

        """
        if not isinstance(d, dict):
            raise ConfigError("configuration must be a JSON object")
        unknown = sorted(set(d) - set(KEYS))
        if unknown:
            raise ConfigError("unknown configuration keys %s" % unknown)
        if "seed" not in d:
            raise ConfigError("configuration lacks the mandatory 'seed'")
        if not _is_int(d["seed"]) or not 0 <= d["seed"] < 2 ** 64:
            raise ConfigError("seed must be an unsigned 64-bit integer, got %r" % (d["seed"],))

        self.raw = OrderedDict(d)
        self.base_dir = os.path.abspath(base_dir)
        self.filename = filename
        self.seed = d["seed"]

        workers = d.get("workers", os.cpu_count() or 1)
        if not _is_int(workers) or workers < 1:
            raise ConfigError("workers must be a positive integer, got %r" % (workers,))
        self.workers = workers
        self.output = self.path(d.get("output", "out"))

        self.rules = load_rules(self._existing(d.get("rules", "default"), "rules"))
        self.decks = load_decks(self._existing(d.get("decks", "default"), "decks"), self.rules)

        self.generate = OrderedDict(d.get("generate") or {})
        self.train = OrderedDict(d.get("train") or {})
        self.experiment = OrderedDict(d.get("experiment") or {})
        self._check_generate()
        self._check_train()
        unknown = sorted(set(self.experiment) - set(EXPERIMENTS))
        if unknown:
            raise ConfigError("unknown experiments %s" % unknown)

    @classmethod
    def from_file(cls, filename, seed=None, workers=None, output=None):
        """
        Load a configuration file.

        :param filename: path to a JSON file
        :param seed: overrides the configured seed
        :param workers: overrides the configured number of workers
        :param output: overrides the configured output directory (relative to the working
            directory)
        :raises ConfigError: if the file is missing or invalid

        """
        if not os.path.isfile(filename):
            raise ConfigError("configuration file '%s' does not exist" % filename)
        try:
            with io.open(filename, "r", encoding="utf-8") as fh:
                d = json.load(fh, object_pairs_hook=OrderedDict)
        except ValueError as e:
            raise ConfigError("configuration file '%s' is not valid JSON: %s" % (filename, e))
        if isinstance(d, dict):
            if seed is not None:
                d["seed"] = seed
            if workers is not None:
                d["workers"] = workers
            if output is not None:
                d["output"] = os.path.abspath(output)
        return cls(d, base_dir=os.path.dirname(os.path.abspath(filename)), filename=filename)

    def path(self, p):
        """
        Resolve ``p`` against the configuration directory.
        """
        return p if os.path.isabs(p) else os.path.normpath(os.path.join(self.base_dir, p))

    def _existing(self, p, key):
        if p == "default":
            return None
        if not isinstance(p, str):
            raise ConfigError("'%s' must be a path or \"default\"" % key)
        p = self.path(p)
        if not os.path.exists(p):
            raise ConfigError("%s file '%s' does not exist" % (key, p))
        return p

    def _check_generate(self):
        g = self.generate
        if not g:
            return
        agents = g.get("agents")
        if not isinstance(agents, list) or len(agents) != 2:
            raise ConfigError("'generate.agents' must list two agent specs")
        games = g.get("games", 1)
        if not _is_int(games) or games < 1:
            raise ConfigError("'generate.games' must be a positive integer, got %r" % (games,))
        if g.get("log_mode", "both") not in LOG_MODES:
            raise ConfigError("'generate.log_mode' must be one of %s" % ", ".join(LOG_MODES))
        if g.get("decks", "train") not in self.decks:
            raise ConfigError("'generate.decks' must be 'train' or 'test'")

    def _check_train(self):
        t = self.train
        if not t:
            return
        if t.get("model", "value") not in ("value", "policy"):
            raise ConfigError("'train.model' must be 'value' or 'policy'")
        self.train_param()

    def train_param(self):
        """
        The ``TrainParam`` of the ``train`` section; the seed defaults to the experiment seed.
        """
        d = dict(self.train.get("param") or {})
        d.setdefault("seed", self.seed % 2 ** 32)
        return TrainParam.from_dict(d)

    def section(self, name):
        """
        Return the configuration of experiment ``name``.

        :raises ConfigError: if the configuration has none

        """
        if name not in self.experiment:
            raise ConfigError("configuration has no '%s' experiment" % name)
        return OrderedDict(self.experiment[name])

    def dict(self):
        """
        The effective configuration, overrides included.
        """
        d = OrderedDict(self.raw)
        d["seed"] = self.seed
        d["workers"] = self.workers
        return d

    def digest(self):
        """
        SHA-256 of the canonical JSON of the configuration without the worker count, which does not
        affect results.
        """
        d = self.dict()
        d.pop("workers", None)
        d.pop("output", None)
        return sha256_hex(canonical_json(d))

    def __repr__(self):
        return "<ExperimentConfig(seed=%d, %s)>" % (self.seed, self.filename or "<dict>")
