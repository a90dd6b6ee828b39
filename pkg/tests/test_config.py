# -*- coding: utf-8 -*-

import json
import os

import pytest

from cardsearch.config import ExperimentConfig
from cardsearch.util import ConfigError

BASE = {
    "seed": 7,
    "workers": 1,
    "generate": {"agents": [{"type": "random"}, {"type": "random"}], "games": 2},
    "train": {"model": "value", "hidden": [4], "param": {"epochs": 1}},
}


def write_config(path, d):
    filename = str(path / "config.json")
    with open(filename, "w") as fh:
        json.dump(d, fh)
    return filename


def test_defaults():
    config = ExperimentConfig(dict(BASE))
    assert config.seed == 7
    assert config.workers == 1
    assert config.rules.rules_version == "cardsearch-rules-1"
    assert sorted(config.decks) == ["test", "train"]
    assert config.output == os.path.abspath("out")
    assert config.train_param().seed == 7
    assert config.train_param().epochs == 1


def test_seed():
    with pytest.raises(ConfigError):
        ExperimentConfig({"workers": 1})
    for seed in (-1, 2 ** 64, 1.5, "1", True):
        with pytest.raises(ConfigError):
            ExperimentConfig({"seed": seed})
    assert ExperimentConfig({"seed": 2 ** 64 - 1}).train_param().seed == 2 ** 32 - 1


def test_invalid():
    bad = (
        [],
        {"seed": 1, "sede": 2},
        {"seed": 1, "workers": 0},
        {"seed": 1, "rules": "missing.json"},
        {"seed": 1, "decks": 3},
        {"seed": 1, "generate": {"agents": [{"type": "random"}]}},
        {"seed": 1, "generate": {"agents": BASE["generate"]["agents"], "games": 0}},
        {"seed": 1, "generate": {"agents": BASE["generate"]["agents"], "log_mode": "all"}},
        {"seed": 1, "generate": {"agents": BASE["generate"]["agents"], "decks": "valid"}},
        {"seed": 1, "train": {"model": "tree"}},
        {"seed": 1, "train": {"param": {"optimizer": "rmsprop"}}},
        {"seed": 1, "experiment": {"ablation": {}}},
    )
    for d in bad:
        with pytest.raises(ConfigError):
            ExperimentConfig(d)


def test_section():
    config = ExperimentConfig({"seed": 1, "experiment": {"tournament": {"games_per_pairing": 3}}})
    assert config.section("tournament")["games_per_pairing"] == 3
    with pytest.raises(ConfigError):
        config.section("generality")


def test_from_file(tmp_path):
    filename = write_config(tmp_path, dict(BASE, output="results"))
    config = ExperimentConfig.from_file(filename)
    assert config.output == str(tmp_path / "results")
    assert config.base_dir == str(tmp_path)

    config = ExperimentConfig.from_file(filename, seed=9, workers=3, output=str(tmp_path / "elsewhere"))
    assert (config.seed, config.workers) == (9, 3)
    assert config.output == str(tmp_path / "elsewhere")

    with pytest.raises(ConfigError):
        ExperimentConfig.from_file(str(tmp_path / "missing.json"))
    broken = str(tmp_path / "broken.json")
    with open(broken, "w") as fh:
        fh.write("{seed: 1")
    with pytest.raises(ConfigError):
        ExperimentConfig.from_file(broken)


def test_relative_rules(tmp_path):
    from cardsearch.game.cards import DEFAULT_RULES

    with open(DEFAULT_RULES) as fh:
        rules = json.load(fh)
    with open(str(tmp_path / "rules.json"), "w") as fh:
        json.dump(rules, fh)
    config = ExperimentConfig.from_file(write_config(tmp_path, {"seed": 1, "rules": "rules.json"}))
    assert config.rules.rules_version == "cardsearch-rules-1"


def test_digest():
    a = ExperimentConfig(dict(BASE))
    b = ExperimentConfig(dict(BASE, workers=4, output="other"))
    assert a.digest() == b.digest()
    assert a.digest() != ExperimentConfig(dict(BASE, seed=8)).digest()
    assert len(a.digest()) == 64
    assert a.dict()["workers"] == 1
