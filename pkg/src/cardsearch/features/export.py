# -*- coding: utf-8 -*-
"""
Dataset files.

A dataset directory holds some of

- ``states.csv``: one row per state example, the encoding columns followed by ``game_id``,
  ``turn``, ``deck_pair`` and ``label``.  The first line is a comment recording the rules and
  encoding versions.
- ``states.jsonl``: one detailed game state per line, including the initial state of every game.
- ``sequences_rows.npy``, ``sequences_index.npy``, ``sequences_labels.npy``: the arrays of a
  ``SequenceDataset``.
- ``manifest.json``: versions, configuration hash, seed, agents, counts and the SHA-256 of every
  file above.

All files are written deterministically; only the ``created`` entry of the manifest depends on the
clock and it is not covered by ``manifest_hash``.

..  moduleauthor:: The cardsearch developers

"""

import datetime
import io
import json
import logging
import os
from collections import OrderedDict

import numpy as np
import pandas as pd

from cardsearch.features.dataset import SequenceDataset, StateDataset, dataset_summary
from cardsearch.features.encoding import ENCODING_VERSION, SEQUENCE_WIDTH
from cardsearch.game.engine import state_to_dict
from cardsearch.util import ConfigError, EncodingMismatch, ShapeMismatch, canonical_json, sha256_file, sha256_hex

logger = logging.getLogger(__name__)

LOG_MODES = ("states", "sequences", "both")
STATES_CSV = "states.csv"
STATES_JSONL = "states.jsonl"
SEQUENCE_FILES = ("sequences_rows.npy", "sequences_index.npy", "sequences_labels.npy")
MANIFEST = "manifest.json"


def _versions_line(rules_version):
    return "# rules_version=%s,encoding_version=%s\n" % (rules_version, ENCODING_VERSION)


def _parse_versions(line):
    versions = OrderedDict()
    for item in line.lstrip("#").strip().split(","):
        if "=" in item:
            key, value = item.split("=", 1)
            versions[key.strip()] = value.strip()
    return versions


def write_states_csv(states, filename, rules_version):
    """
    Write the state examples ``states`` as CSV.

    :param states: a ``StateDataset``
    :param filename: target path
    :param rules_version: version string of the rules the games were played with

    """
    with io.open(filename, "w", encoding="utf-8", newline="") as fh:
        fh.write(_versions_line(rules_version))
        states.frame().to_csv(fh, index=False, float_format="%.9g", lineterminator="\n")


def read_states_csv(filename):
    """
    Read a file written by ``write_states_csv``.

    :returns: ``(states, versions)`` where ``versions`` maps ``rules_version`` and
        ``encoding_version`` to the recorded strings
    :raises EncodingMismatch: if the file was written with another state encoding

    """
    with io.open(filename, "r", encoding="utf-8") as fh:
        first = fh.readline()
    versions = _parse_versions(first) if first.startswith("#") else OrderedDict()
    if versions.get("encoding_version", ENCODING_VERSION) != ENCODING_VERSION:
        raise EncodingMismatch(
            "'%s' uses encoding %s, expected %s" % (filename, versions["encoding_version"], ENCODING_VERSION)
        )
    df = pd.read_csv(filename, comment="#", dtype={"deck_pair": str})
    return StateDataset.from_frame(df), versions


def write_states_jsonl(games, filename, rules_version):
    """
    Write every state of every game in ``games`` as one JSON object per line.

    Each object holds ``game_id``, ``step``, ``turn``, the ``action`` played in the state (``null``
    for the final state), the player 0 ``label``, both versions and the nested ``state``.

    :returns: the number of lines written

    """
    n = 0
    with io.open(filename, "w", encoding="utf-8", newline="\n") as fh:
        for game in games:
            log = game.log
            label = 1 if game.winner == 0 else 0
            for step, state in enumerate(log.states):
                record = OrderedDict(
                    [
                        ("game_id", game.index),
                        ("step", step),
                        ("turn", state.turn),
                        ("action", log.actions[step] if step < len(log.actions) else None),
                        ("label", label),
                        ("decks", list(game.decks)),
                        ("rules_version", rules_version),
                        ("encoding_version", ENCODING_VERSION),
                        ("state", state_to_dict(state)),
                    ]
                )
                fh.write(json.dumps(record) + "\n")
                n += 1
    return n


def read_states_jsonl(filename):
    """
    Return the objects of a JSON Lines file as a list.
    """
    with io.open(filename, "r", encoding="utf-8") as fh:
        return [json.loads(line, object_pairs_hook=OrderedDict) for line in fh if line.strip()]


def write_sequences(sequences, directory):
    """
    Write the arrays of the ``SequenceDataset`` ``sequences`` to ``directory``.

    :returns: the file names written

    """
    arrays = (sequences.rows, sequences.index, sequences.labels)
    for name, array in zip(SEQUENCE_FILES, arrays):
        np.save(os.path.join(directory, name), array, allow_pickle=False)
    return list(SEQUENCE_FILES)


def read_sequences(directory, window=None):
    """
    Read the arrays written by ``write_sequences``.

    :raises ShapeMismatch: if the rows do not have the sequence width

    """
    rows, index, labels = [np.load(os.path.join(directory, name), allow_pickle=False) for name in SEQUENCE_FILES]
    if rows.ndim != 2 or rows.shape[1] != SEQUENCE_WIDTH:
        raise ShapeMismatch("sequence rows have shape %s, expected width %d" % (rows.shape, SEQUENCE_WIDTH))
    if window is None:
        return SequenceDataset(rows, index, labels)
    return SequenceDataset(rows, index, labels, window)


def manifest_hash(manifest):
    """
    SHA-256 of the canonical JSON of ``manifest`` without its ``created`` and ``manifest_hash``
    entries.

        >>> manifest_hash({"seed": 1}) == manifest_hash({"seed": 1, "created": "today"})
        True

    """
    d = dict((k, v) for k, v in manifest.items() if k not in ("created", "manifest_hash"))
    return sha256_hex(canonical_json(d))


def export_dataset(
    games, directory, log_mode="both", rules_version="", config_hash=None, seed=None, agents=(), players=(0, 1)
):
    """
    Write the dataset of ``games`` to ``directory`` and return its manifest.

    :param games: ``GameResult`` objects with logs
    :param directory: output directory, created if missing
    :param log_mode: ``"states"``, ``"sequences"`` or ``"both"``
    :param rules_version: rules version of the games
    :param config_hash: SHA-256 of the generating configuration
    :param seed: dataset seed
    :param agents: agent specs
    :param players: players whose decisions become sequence examples

    """
    if log_mode not in LOG_MODES:
        raise ConfigError("log mode must be one of %s, got '%s'" % (", ".join(LOG_MODES), log_mode))
    if not os.path.isdir(directory):
        os.makedirs(directory)

    games = list(games)
    counts = OrderedDict([("games", len(games)), ("actions", sum(g.actions for g in games))])
    files = []
    summary = None
    if log_mode in ("states", "both"):
        states = StateDataset.from_games(games)
        write_states_csv(states, os.path.join(directory, STATES_CSV), rules_version)
        counts["states"] = len(states)
        counts["jsonl_lines"] = write_states_jsonl(games, os.path.join(directory, STATES_JSONL), rules_version)
        files += [STATES_CSV, STATES_JSONL]
        summary = dataset_summary(states)
    if log_mode in ("sequences", "both"):
        sequences = SequenceDataset.from_games(games, players=players)
        files += write_sequences(sequences, directory)
        counts["sequences"] = len(sequences)

    manifest = OrderedDict()
    manifest["rules_version"] = rules_version
    manifest["encoding_version"] = ENCODING_VERSION
    manifest["config_hash"] = config_hash
    manifest["seed"] = seed
    manifest["agents"] = list(agents)
    manifest["log_mode"] = log_mode
    manifest["counts"] = counts
    manifest["summary"] = summary
    manifest["games"] = [
        OrderedDict([("index", g.index), ("seed", g.seed), ("decks", list(g.decks)), ("winner", g.winner)])
        for g in games
    ]
    manifest["files"] = OrderedDict((name, sha256_file(os.path.join(directory, name))) for name in files)
    manifest["manifest_hash"] = manifest_hash(manifest)
    manifest["created"] = datetime.datetime.now().isoformat()

    with io.open(os.path.join(directory, MANIFEST), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(manifest, indent=2) + "\n")
    logger.info("wrote %s to %s", ", ".join(files), directory)
    return manifest


def read_manifest(directory):
    """
    Read the manifest of a dataset directory.

    :raises ConfigError: if there is none

    """
    filename = os.path.join(directory, MANIFEST)
    if not os.path.exists(filename):
        raise ConfigError("'%s' holds no dataset manifest" % directory)
    with io.open(filename, "r", encoding="utf-8") as fh:
        return json.load(fh, object_pairs_hook=OrderedDict)
