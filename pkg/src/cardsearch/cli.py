# -*- coding: utf-8 -*-
"""
Command line interface::

    cardsearch generate --config configs/smoke.json
    cardsearch train --config configs/smoke.json
    cardsearch experiment tournament --config configs/smoke.json

Every command reads one experiment configuration, writes its machine readable results to the output
directory and prints a short summary.  Exit codes are ``0`` on success, ``2`` for configuration and
shape errors and ``1`` for any other failure.

..  moduleauthor:: The cardsearch developers

"""

import argparse
import logging
import os
import sys

from cardsearch.util import CardSearchError, ConfigError, EncodingMismatch, ShapeMismatch

logger = logging.getLogger("cardsearch")

EXIT_OK, EXIT_RUNTIME, EXIT_CONFIG = 0, 1, 2


def _output(config):
    if not os.path.isdir(config.output):
        os.makedirs(config.output)
    return config.output


def cmd_generate(config):
    """
    Play the games of the ``generate`` section and write the dataset to the output directory.

    :returns: the manifest

    """
    from cardsearch.features.dataset import generate_games
    from cardsearch.features.export import export_dataset
    from cardsearch.tools.search_stats import pretty_dict

    g = config.generate
    if not g:
        raise ConfigError("configuration has no 'generate' section")
    agents = list(g["agents"])
    games = generate_games(
        agents,
        g.get("games", 1),
        config.seed,
        config.decks[g.get("decks", "train")],
        config.rules,
        config.workers,
        base_dir=config.base_dir,
    )
    manifest = export_dataset(
        games,
        _output(config),
        log_mode=g.get("log_mode", "both"),
        rules_version=config.rules.rules_version,
        config_hash=config.digest(),
        seed=config.seed,
        agents=agents,
        players=tuple(g.get("players", (0, 1))),
    )
    print(pretty_dict(manifest["counts"]))
    if manifest["summary"] is not None:
        print(pretty_dict(manifest["summary"]))
    print("manifest %s" % manifest["manifest_hash"])
    return manifest


def cmd_train(config):
    """
    Train the network described by the ``train`` section on the dataset in ``train.dataset``
    (default: the output directory) and write the model and its loss history.

    :returns: a ``TrainResult``

    """
    from cardsearch.features.export import STATES_CSV, read_sequences, read_states_csv
    from cardsearch.nn.network import policy_network, value_network
    from cardsearch.nn.train import train
    from cardsearch.tools.experiments import write_history

    t = config.train
    if not t:
        raise ConfigError("configuration has no 'train' section")
    dataset = config.path(t.get("dataset", config.output))
    if not os.path.isdir(dataset):
        raise ConfigError("dataset directory '%s' does not exist" % dataset)
    param = config.train_param()
    kind = t.get("model", "value")
    seed = config.seed % 2 ** 32

    if kind == "value":
        filename = os.path.join(dataset, STATES_CSV)
        if not os.path.exists(filename):
            raise ConfigError("'%s' holds no state dataset" % dataset)
        states, _ = read_states_csv(filename)
        network = value_network(hidden=tuple(t.get("hidden", (128, 64))), seed=seed)
        validation = None
        fraction = t.get("validation_fraction", 0.0)
        if fraction:
            states, held_out = states.split_by_game(1.0 - fraction, seed)
            validation = (held_out.x, held_out.label) if len(held_out) else None
        result = train(network, states.x, states.label, param, validation)
    else:
        sequences = read_sequences(dataset, t.get("window"))
        network = policy_network(
            hidden=t.get("hidden", 64), depth=t.get("depth", 2), dropout=t.get("dropout", 0.2), seed=seed
        )
        result = train(network, sequences.windows, sequences.labels, param)

    out = _output(config)
    network.save(os.path.join(out, "%s.csnn" % kind))
    write_history(result.history, os.path.join(out, "%s_history.csv" % kind), result.validation)
    if result.history:
        print("%s network: %d params, final loss %.6f" % (kind, network.n_params, result.history[-1]))
    else:
        print("%s network: %d params, untrained" % (kind, network.n_params))
    return result


def cmd_experiment(config, which):
    """
    Run the experiment ``which`` of the ``experiment`` section.

    :param which: ``"generality"``, ``"curriculum"`` or ``"tournament"``

    """
    from cardsearch.nn.network import load_network
    from cardsearch.tools import experiments
    from cardsearch.tools.compare import run_tournament

    section = config.section(which)
    out = _output(config)

    if which == "tournament":
        agents = section.get("agents")
        if not isinstance(agents, list) or len(agents) < 2:
            raise ConfigError("'experiment.tournament.agents' must list at least two agents")
        report = run_tournament(
            agents,
            section.get("games_per_pairing", 1),
            config.seed,
            config.decks[section.get("decks", "train")],
            config.rules,
            config.workers,
            base_dir=config.base_dir,
            mirrored=bool(section.get("mirrored", False)),
        )
        report.write_jsonl(os.path.join(out, "tournament.jsonl"))
        print(report.summary())
        return report

    if which == "generality":
        network = None
        if section.get("model"):
            path = config.path(section["model"])
            if not os.path.exists(path):
                raise ConfigError("model file '%s' does not exist" % path)
            network = load_network(path)
        report = experiments.generality_experiment(
            config.decks,
            config.seed,
            train_games=section.get("train_games", 1000),
            test_games=section.get("test_games", 200),
            mcts_iterations=section.get("mcts_iterations", 1000),
            hidden=tuple(section.get("hidden", (128, 64))),
            train_param=config.train_param(),
            network=network,
            rules=config.rules,
            workers=config.workers,
            output=out,
        )
        print("AUC random %.4f" % report.random.overall_auc)
        print("AUC mcts   %.4f" % report.mcts.overall_auc)
        print("delta      %.4f" % report.delta)
        return report

    report = experiments.distillation_curriculum(
        config.decks,
        config.seed,
        low=section.get("low", 1000),
        high=section.get("high", 10000),
        low_games=section.get("low_games", 1000),
        high_games=section.get("high_games", 200),
        eval_games=section.get("eval_games", 200),
        hidden=section.get("hidden", 64),
        depth=section.get("depth", 2),
        dropout=section.get("dropout", 0.2),
        train_param=config.train_param(),
        rules=config.rules,
        workers=config.workers,
        output=out,
    )
    print(experiments.curriculum_table(report.rows))
    return report


def parser():
    p = argparse.ArgumentParser(prog="cardsearch", description="heuristic-augmented MCTS on a small card game")
    sub = p.add_subparsers(dest="command")
    sub.required = True

    def common(q):
        q.add_argument("-c", "--config", help="experiment configuration file", type=str, required=True)
        q.add_argument("-o", "--out", help="output directory, overrides the configuration", type=str, default=None)
        q.add_argument("-t", "--workers", help="number of worker processes", type=int, default=None)
        q.add_argument("-z", "--seed", help="random seed, overrides the configuration", type=int, default=None)
        q.add_argument("-v", "--verbose", help="print more details", action="store_true")

    common(sub.add_parser("generate", help="play games and write a dataset"))
    common(sub.add_parser("train", help="train a value or policy network"))
    q = sub.add_parser("experiment", help="run an experiment")
    q.add_argument("which", choices=("generality", "curriculum", "tournament"))
    common(q)
    return p


def main(argv=None):
    """
    Run the command line ``argv`` and return the exit code.
    """
    from cardsearch.config import ExperimentConfig
    from cardsearch.tools.compare import setup_logging

    args = parser().parse_args(argv)
    try:
        config = ExperimentConfig.from_file(args.config, seed=args.seed, workers=args.workers, output=args.out)
        out = _output(config)
        # the log lives next to the output directory
        setup_logging("cardsearch", args.verbose, directory=os.path.dirname(out), prefix=os.path.basename(out))
        logger.debug("%s with %r", args.command, config)
        if args.command == "generate":
            cmd_generate(config)
        elif args.command == "train":
            cmd_train(config)
        else:
            cmd_experiment(config, args.which)
    except (ConfigError, ShapeMismatch, EncodingMismatch) as e:
        print("cardsearch: error: %s" % e, file=sys.stderr)
        return EXIT_CONFIG
    except CardSearchError as e:
        diagnostics = getattr(e, "diagnostics", None)
        print("cardsearch: %s: %s" % (e.__class__.__name__, e), file=sys.stderr)
        if diagnostics:
            print("cardsearch: %s" % diagnostics, file=sys.stderr)
        return EXIT_RUNTIME
    except (IOError, OSError) as e:
        print("cardsearch: error: %s" % e, file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK
