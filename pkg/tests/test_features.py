# -*- coding: utf-8 -*-

import io
import os

import numpy as np
import pytest

from cardsearch.agents import GameLog
from cardsearch.features import (
    SEQUENCE_WIDTH,
    STATE_WIDTH,
    action_one_hot,
    column_names,
    encode_state,
    encode_states,
    layout,
    sequence_window,
)
from cardsearch.features.dataset import SequenceDataset, StateDataset, build_sequences, dataset_summary, generate_games
from cardsearch.features.encoding import ENCODING_VERSION, offset
from cardsearch.features.export import (
    MANIFEST,
    STATES_CSV,
    STATES_JSONL,
    export_dataset,
    read_manifest,
    read_sequences,
    read_states_csv,
    read_states_jsonl,
)
from cardsearch.game import load_decks, swap_players
from cardsearch.util import ConfigError, EncodingMismatch

import tools

RANDOM = [{"type": "random"}, {"type": "random", "name": "other"}]


def random_log(seed):
    states, actions = tools.random_trace(seed)
    return GameLog(states, actions, states[-1].outcome, seed, ("random", "random"))


def games(n=3, seed=5):
    return generate_games(RANDOM, n, seed, load_decks()["train"])


def test_widths():
    assert STATE_WIDTH == 372
    assert SEQUENCE_WIDTH == 414
    assert len(column_names()) == STATE_WIDTH
    fields = layout()
    assert fields[0].offset == 0
    for a, b in zip(fields, fields[1:]):
        assert a.offset + a.length == b.offset
    assert fields[-1].offset + fields[-1].length == STATE_WIDTH


def test_initial_encoding():
    s = tools.start(0)
    for p in (0, 1):
        v = encode_state(s, p)
        assert v.shape == (STATE_WIDTH,)
        assert v[offset("my_hero_health")] == 1.0
        assert v[offset("opp_hero_health")] == 1.0
        assert v[offset("turn")] == 1 / 200.0
        assert np.all((v >= 0.0) & (v <= 1.0))
    assert encode_state(s, 0)[offset("my_turn")] == 1.0
    assert encode_state(s, 1)[offset("my_turn")] == 0.0
    # three cards in the hand of player 0, one hot each
    assert encode_state(s, 0)[:300].sum() == 3.0


def test_encoding_range():
    states, _ = tools.random_trace(1)
    x = encode_states(states, 1)
    assert x.shape == (len(states), STATE_WIDTH)
    assert np.all((x >= 0.0) & (x <= 1.0))
    assert np.array_equal(x[5], encode_state(states[5], 1))


def test_swap_symmetry():
    states, _ = tools.random_trace(2)
    for s in states[::4]:
        assert np.array_equal(encode_state(s, 0), encode_state(swap_players(s), 1))


def test_board_stats_distinguished():
    a = tools.make_state(me=dict(board=tools.board(tools.minion(3, 2, 3))))
    b = tools.make_state(me=dict(board=tools.board(tools.minion(3, 2, 2))))
    c = tools.make_state(me=dict(board=tools.board(tools.minion(3, 2, 3, can_attack=False))))
    assert not np.array_equal(encode_state(a, 0), encode_state(b, 0))
    assert not np.array_equal(encode_state(a, 0), encode_state(c, 0))
    assert not np.array_equal(encode_state(a, 0), encode_state(a, 1))


def test_action_one_hot():
    assert action_one_hot(41).argmax() == 41
    assert action_one_hot(41).sum() == 1.0
    assert not action_one_hot(None).any()


def test_sequence_window():
    states, actions = tools.random_trace(3)
    assert len(actions) >= 12
    p = states[11].active_player
    w = sequence_window(states, actions, 11, p)
    assert w.shape == (10, SEQUENCE_WIDTH)
    for row in range(10):
        j = 2 + row
        assert np.array_equal(w[row, :STATE_WIDTH], encode_state(states[j], p))
        assert np.array_equal(w[row, STATE_WIDTH:], action_one_hot(actions[j - 1]))


def test_sequence_window_start():
    s = tools.start(0)
    w = sequence_window([s], [], 0, 0)
    assert not w[:9].any()
    assert np.array_equal(w[9, :STATE_WIDTH], encode_state(s, 0))
    assert not w[9, STATE_WIDTH:].any()


def test_build_sequences():
    log = random_log(4)
    records = build_sequences(log)
    assert len(records) == len(log.actions)
    assert [r.label for r in records] == log.actions
    only0 = build_sequences(log, players=(0,))
    assert len(only0) == sum(1 for s in log.states[:-1] if s.active_player == 0)


def test_sequence_dataset_matches_windows():
    played = games(2, seed=6)
    dataset = SequenceDataset.from_games(played)
    expected = []
    for game in played:
        for p in (0, 1):
            expected.extend(build_sequences(game.log, players=(p,)))
    assert len(dataset) == len(expected) == sum(len(g.log.actions) for g in played)
    for i in range(0, len(dataset), 7):
        record = dataset[i]
        assert record.label == expected[i].label
        assert np.allclose(record.window, expected[i].window, atol=1e-6)
    batch = dataset.windows[np.arange(3)]
    assert batch.shape == (3, 10, SEQUENCE_WIDTH)


def test_generate_games():
    a, b = games(), games()
    assert [g.log.actions for g in a] == [g.log.actions for g in b]
    assert [g.winner for g in a] == [g.winner for g in b]
    for g in a:
        assert len(g.log.states) == len(g.log.actions) + 1
    with pytest.raises(ValueError):
        generate_games(RANDOM[:1], 1, 0, load_decks()["train"])


def test_state_dataset():
    played = games()
    states = StateDataset.from_games(played)
    assert len(states) == sum(g.actions for g in played)
    for game_id in np.unique(states.game_id):
        assert len(set(states.label[states.game_id == game_id].tolist())) == 1
    record = states[0]
    assert record.turn >= 1
    assert record.features.shape == (STATE_WIDTH,)

    frame = states.frame()
    assert list(frame.columns[-4:]) == ["game_id", "turn", "deck_pair", "label"]
    again = StateDataset.from_frame(frame)
    assert np.array_equal(again.x, states.x)
    assert list(again.deck1) == list(states.deck1)

    first, second = states.split_by_game(0.5, seed=1)
    assert len(first) + len(second) == len(states)
    assert not set(first.game_id.tolist()) & set(second.game_id.tolist())


def test_dataset_summary():
    summary = dataset_summary(StateDataset.from_games(games()))
    assert list(summary) == ["games", "examples", "decks", "player0_wins", "min_deck_win_rate", "max_deck_win_rate"]
    assert summary["games"] == 3
    assert 0.0 <= summary["min_deck_win_rate"] <= summary["max_deck_win_rate"] <= 100.0


def test_export(tmp_path):
    played = games()
    directory = str(tmp_path / "data")
    manifest = export_dataset(played, directory, rules_version="cardsearch-rules-1", seed=5, agents=RANDOM)
    assert read_manifest(directory)["manifest_hash"] == manifest["manifest_hash"]
    assert sorted(manifest["files"]) == sorted(
        [STATES_CSV, STATES_JSONL, "sequences_rows.npy", "sequences_index.npy", "sequences_labels.npy"]
    )
    assert manifest["counts"]["games"] == 3

    states, versions = read_states_csv(os.path.join(directory, STATES_CSV))
    assert versions["rules_version"] == "cardsearch-rules-1"
    original = StateDataset.from_games(played)
    assert np.max(np.abs(states.x - original.x)) < 1e-6
    assert np.array_equal(states.label, original.label)

    with io.open(os.path.join(directory, STATES_CSV), encoding="utf-8") as fh:
        assert fh.readline().startswith("# rules_version=cardsearch-rules-1,")
        header = fh.readline().strip().split(",")
    assert len(header) == 376
    assert header[-4:] == ["game_id", "turn", "deck_pair", "label"]
    assert versions["encoding_version"] == ENCODING_VERSION

    lines = read_states_jsonl(os.path.join(directory, STATES_JSONL))
    assert len(lines) == manifest["counts"]["jsonl_lines"] == sum(len(g.log.states) for g in played)
    first = lines[0]
    assert first["step"] == 0
    assert first["state"]["players"][0]["board"] == [None] * 7
    assert first["state"]["players"][0]["hand_size"] == 3
    assert lines[-1]["action"] is None

    sequences = read_sequences(directory)
    assert len(sequences) == manifest["counts"]["sequences"]

    other = export_dataset(played, str(tmp_path / "again"), rules_version="cardsearch-rules-1", seed=5, agents=RANDOM)
    assert other["manifest_hash"] == manifest["manifest_hash"]
    assert other["files"] == manifest["files"]


def test_export_modes(tmp_path):
    played = games(1)
    manifest = export_dataset(played, str(tmp_path / "s"), log_mode="states")
    assert "sequences" not in manifest["counts"]
    manifest = export_dataset(played, str(tmp_path / "q"), log_mode="sequences")
    assert manifest["summary"] is None
    assert not os.path.exists(str(tmp_path / "q" / STATES_CSV))
    with pytest.raises(ConfigError):
        export_dataset(played, str(tmp_path / "x"), log_mode="everything")
    with pytest.raises(ConfigError):
        read_manifest(str(tmp_path / "x"))


def test_encoding_mismatch(tmp_path):
    directory = str(tmp_path)
    export_dataset(games(1), directory, log_mode="states")
    filename = os.path.join(directory, STATES_CSV)
    with io.open(filename, encoding="utf-8") as fh:
        lines = fh.readlines()
    lines[0] = "# rules_version=cardsearch-rules-1,encoding_version=cardsearch-state-0\n"
    with io.open(filename, "w", encoding="utf-8", newline="") as fh:
        fh.writelines(lines)
    with pytest.raises(EncodingMismatch):
        read_states_csv(filename)
    assert os.path.exists(os.path.join(directory, MANIFEST))
