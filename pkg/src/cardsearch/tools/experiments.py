# -*- coding: utf-8 -*-
"""
Experiments built from self-play, training and tournaments.

``generality_experiment``
    Train a value network on random-agent games with the training decks and measure its AUC on
    random-agent and MCTS-agent games played with the held-out decks.

``distillation_curriculum``
    Train sequence policy networks on the decisions of a cheap and of an expensive MCTS agent,
    plus the cheap network retrained on the expensive games, and play the greedy policy agents
    against a random agent and against the cheap MCTS agent.

..  moduleauthor:: The cardsearch developers

"""

import io
import json
import logging
import os
from collections import OrderedDict, namedtuple

import numpy as np
import pandas as pd

from cardsearch.features.dataset import SequenceDataset, StateDataset, dataset_summary, generate_games
from cardsearch.nn.network import policy_network, value_network
from cardsearch.nn.train import TrainParam, train
from cardsearch.tools.compare import run_tournament
from cardsearch.tools.metrics import auc_report, per_turn_table
from cardsearch.util import derive_seed

logger = logging.getLogger(__name__)

GeneralityReport = namedtuple(
    "GeneralityReport", ("random", "mcts", "train", "delta", "network", "history", "summaries")
)
CurriculumReport = namedtuple("CurriculumReport", ("networks", "histories", "rows", "tournaments"))

# seed streams
_TRAIN_GAMES, _RANDOM_TEST, _MCTS_TEST, _LOW_GAMES, _HIGH_GAMES, _TOURNAMENT = range(6)


def predict(network, x, batch_size=4096):
    """
    First output of ``network`` for every row of ``x``, computed in batches.
    """
    network.eval_mode()
    out = np.empty(len(x))
    for start in range(0, len(x), batch_size):
        out[start : start + batch_size] = network.forward(x[start : start + batch_size])[:, 0]
    return out


def evaluate_value_network(network, states):
    """
    ``AucReport`` of the win probabilities predicted by ``network`` for the ``StateDataset``
    ``states``.
    """
    return auc_report(predict(network, states.x), states.label, states.turn)


def write_per_turn_csv(reports, filename):
    """
    Write the per-turn AUC of every report in ``reports``, a dictionary name -> ``AucReport``, as
    CSV with columns ``dataset``, ``turn``, ``auc`` and ``n``.
    """
    frames = []
    for name, report in reports.items():
        df = pd.DataFrame(per_turn_table(report.per_turn))
        df.insert(0, "dataset", name)
        frames.append(df)
    df = pd.concat(frames, ignore_index=True)
    df.to_csv(filename, index=False, float_format="%.6f", lineterminator="\n")


def _random_specs():
    return [{"type": "random"}, {"type": "random"}]


def _mcts_specs(iterations):
    return [{"type": "mcts", "iterations": iterations}, {"type": "mcts", "iterations": iterations}]


def generality_experiment(
    decks,
    seed,
    train_games=1000,
    test_games=200,
    mcts_iterations=1000,
    hidden=(128, 64),
    train_param=None,
    network=None,
    rules=None,
    workers=1,
    output=None,
):
    """
    Measure how well a value network trained on random-agent games generalises to games between
    MCTS agents.

    :param decks: dictionary with ``"train"`` and ``"test"`` deck lists
    :param seed: experiment seed
    :param train_games: random-agent games with the training decks
    :param test_games: games per test set, both played with the test decks
    :param mcts_iterations: budget of the MCTS agents of the second test set
    :param hidden: hidden layer widths of the value network
    :param train_param: a ``TrainParam``
    :param network: a trained value network; skips generating training games and training
    :param rules: ``Rules`` or ``None``
    :param workers: worker processes
    :param output: directory receiving ``generality.json`` and ``per_turn_auc.csv``
    :returns: a ``GeneralityReport``; ``delta`` is the AUC on random-agent games minus the AUC on
        MCTS-agent games

    """
    train_param = train_param or TrainParam(seed=seed)
    summaries = OrderedDict()
    history, train_report = [], None

    if network is None:
        games = generate_games(
            _random_specs(), train_games, derive_seed(seed, _TRAIN_GAMES), decks["train"], rules, workers
        )
        states = StateDataset.from_games(games)
        summaries["train"] = dataset_summary(states)
        network = value_network(hidden=hidden, seed=derive_seed(seed, _TRAIN_GAMES) % 2 ** 32)
        result = train(network, states.x, states.label, train_param)
        history = result.history
        train_report = evaluate_value_network(network, states)

    random_games = generate_games(
        _random_specs(), test_games, derive_seed(seed, _RANDOM_TEST), decks["test"], rules, workers
    )
    mcts_games = generate_games(
        _mcts_specs(mcts_iterations), test_games, derive_seed(seed, _MCTS_TEST), decks["test"], rules, workers
    )
    random_states = StateDataset.from_games(random_games)
    mcts_states = StateDataset.from_games(mcts_games)
    summaries["random"] = dataset_summary(random_states)
    summaries["mcts"] = dataset_summary(mcts_states)

    random_report = evaluate_value_network(network, random_states)
    mcts_report = evaluate_value_network(network, mcts_states)
    delta = random_report.overall_auc - mcts_report.overall_auc
    logger.info(
        "AUC random %.4f, mcts(%d) %.4f, delta %.4f",
        random_report.overall_auc,
        mcts_iterations,
        mcts_report.overall_auc,
        delta,
    )

    report = GeneralityReport(random_report, mcts_report, train_report, delta, network, history, summaries)
    if output is not None:
        write_generality(report, output)
    return report


def write_generality(report, directory):
    """
    Write ``generality.json``, ``per_turn_auc.csv`` and, if a network was trained,
    ``value.csnn`` and ``value_history.csv`` to ``directory``.
    """
    if not os.path.isdir(directory):
        os.makedirs(directory)
    reports = OrderedDict([("random", report.random), ("mcts", report.mcts)])
    if report.train is not None:
        reports["train"] = report.train
        report.network.save(os.path.join(directory, "value.csnn"))
        write_history(report.history, os.path.join(directory, "value_history.csv"))
    write_per_turn_csv(reports, os.path.join(directory, "per_turn_auc.csv"))

    d = OrderedDict()
    for name, r in reports.items():
        d[name] = OrderedDict([("auc", r.overall_auc), ("n_pos", r.n_pos), ("n_neg", r.n_neg)])
    d["delta"] = report.delta
    d["summaries"] = report.summaries
    with io.open(os.path.join(directory, "generality.json"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(d, indent=2) + "\n")


def write_history(history, filename, validation=None):
    """
    Write a loss history as CSV with columns ``epoch``, ``loss`` and, if given, ``validation``.
    """
    df = pd.DataFrame(OrderedDict([("epoch", np.arange(len(history))), ("loss", history)]))
    if validation:
        df["validation"] = validation
    df.to_csv(filename, index=False, float_format="%.9g", lineterminator="\n")


def train_policy(sequences, train_param, network=None, hidden=64, depth=2, dropout=0.2, seed=0):
    """
    Train a policy network on the ``SequenceDataset`` ``sequences``.

    :param network: continue training this network instead of a fresh one
    :returns: a ``TrainResult``

    """
    if network is None:
        network = policy_network(hidden=hidden, depth=depth, dropout=dropout, seed=seed)
    return train(network, sequences.windows, sequences.labels, train_param)


def _illegal_rate(tournament, name):
    decisions = illegal = 0
    for game in tournament.games:
        seat = game["players"].index(name)
        stats = game["stats"][seat]
        decisions += stats.get("decisions", 0)
        illegal += stats.get("illegal_argmax", 0)
    return illegal / float(decisions) if decisions else 0.0


def distillation_curriculum(
    decks,
    seed,
    low=1000,
    high=10000,
    low_games=1000,
    high_games=200,
    eval_games=200,
    hidden=64,
    depth=2,
    dropout=0.2,
    train_param=None,
    rules=None,
    workers=1,
    output=None,
):
    """
    Distil MCTS agents into greedy sequence policy agents.

    Three networks are trained: ``low`` on games of MCTS(``low``), ``high`` on games of
    MCTS(``high``) and ``retrained``, the ``low`` network trained further on the MCTS(``high``)
    games.  Each network's greedy agent then plays ``eval_games`` games against a random agent
    and against MCTS(``low``).

    :param decks: dictionary with a ``"train"`` deck list
    :param seed: experiment seed
    :param low: iterations of the cheap agent
    :param high: iterations of the expensive agent
    :param low_games: games of the cheap agent
    :param high_games: games of the expensive agent
    :param eval_games: games per evaluation pairing
    :param hidden: LSTM cells per layer
    :param depth: LSTM layers
    :param dropout: dropout rate after every LSTM layer
    :param train_param: a ``TrainParam``
    :param rules: ``Rules`` or ``None``
    :param workers: worker processes
    :param output: directory receiving the networks, loss histories and ``curriculum.jsonl``
    :returns: a ``CurriculumReport``

    """
    train_param = train_param or TrainParam(seed=seed)
    init_seed = derive_seed(seed, _LOW_GAMES) % 2 ** 32

    low_log = generate_games(
        _mcts_specs(low), low_games, derive_seed(seed, _LOW_GAMES), decks["train"], rules, workers
    )
    high_log = generate_games(
        _mcts_specs(high), high_games, derive_seed(seed, _HIGH_GAMES), decks["train"], rules, workers
    )
    low_sequences = SequenceDataset.from_games(low_log)
    high_sequences = SequenceDataset.from_games(high_log)
    logger.info("%d low-budget and %d high-budget decisions", len(low_sequences), len(high_sequences))

    networks, histories = OrderedDict(), OrderedDict()
    arch = dict(hidden=hidden, depth=depth, dropout=dropout, seed=init_seed)
    result = train_policy(low_sequences, train_param, **arch)
    networks["low"], histories["low"] = result.network, result.history
    result = train_policy(high_sequences, train_param, **arch)
    networks["high"], histories["high"] = result.network, result.history
    result = train_policy(high_sequences, train_param, network=networks["low"].copy())
    networks["retrained"], histories["retrained"] = result.network, result.history

    opponents = OrderedDict([("random", {"type": "random"}), ("mcts", {"type": "mcts", "iterations": low})])
    rows, tournaments = [], OrderedDict()
    for key, network in networks.items():
        name = "greedy(%s)" % key
        agent = {"type": "greedy_policy", "model": key, "name": name}
        for opponent, spec in opponents.items():
            tournament_seed = derive_seed(seed, _TOURNAMENT)
            report = run_tournament(
                [agent, spec], eval_games, tournament_seed, decks["train"], rules, workers, models=networks
            )
            pairing = report.pairing(0, 1)
            tournaments[(key, opponent)] = report
            rows.append(
                OrderedDict(
                    [
                        ("network", key),
                        ("opponent", pairing["name_b"]),
                        ("games", pairing["games"]),
                        ("wins", pairing["wins"]),
                        ("win_rate", pairing["win_rate"]),
                        ("wilson_low", pairing["wilson_low"]),
                        ("wilson_high", pairing["wilson_high"]),
                        ("illegal_argmax_rate", _illegal_rate(report, name)),
                    ]
                )
            )
            logger.info("%s vs %s: %.3f", name, pairing["name_b"], pairing["win_rate"])

    report = CurriculumReport(networks, histories, rows, tournaments)
    if output is not None:
        write_curriculum(report, output)
    return report


def write_curriculum(report, directory):
    """
    Write ``policy-<key>.csnn`` and ``policy-<key>_history.csv`` for every network and one JSON
    line per evaluation row to ``curriculum.jsonl``.
    """
    if not os.path.isdir(directory):
        os.makedirs(directory)
    for key, network in report.networks.items():
        network.save(os.path.join(directory, "policy-%s.csnn" % key))
        write_history(report.histories[key], os.path.join(directory, "policy-%s_history.csv" % key))
    with io.open(os.path.join(directory, "curriculum.jsonl"), "w", encoding="utf-8", newline="\n") as fh:
        for row in report.rows:
            fh.write(json.dumps(row) + "\n")


def curriculum_table(rows):
    """
    Human readable table of the evaluation rows of a curriculum.
    """
    header = ("network", "opponent", "games", "win rate", "95% interval", "illegal")
    lines = ["%-10s  %-10s  %6s  %8s  %17s  %8s" % header]
    for r in rows:
        lines.append(
            "%-10s  %-10s  %6d  %8.3f  %17s  %8.3f"
            % (
                r["network"],
                r["opponent"],
                r["games"],
                r["win_rate"],
                "[%.3f, %.3f]" % (r["wilson_low"], r["wilson_high"]),
                r["illegal_argmax_rate"],
            )
        )
    return "\n".join(lines)
