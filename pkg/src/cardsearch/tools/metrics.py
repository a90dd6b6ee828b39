# -*- coding: utf-8 -*-
"""
Classification metrics and confidence intervals.

..  moduleauthor:: The cardsearch developers

"""

from collections import OrderedDict, namedtuple

import numpy as np
from scipy.stats import norm, rankdata

from cardsearch.util import DegenerateLabels

TURN_BUCKETS = 30

AucReport = namedtuple("AucReport", ("overall_auc", "per_turn", "n_pos", "n_neg"))
TurnAuc = namedtuple("TurnAuc", ("bucket", "auc", "n"))


def _prepare(scores, labels):
    scores = np.asarray(scores, dtype=np.float64).ravel()
    labels = np.asarray(labels).ravel()
    if scores.shape != labels.shape:
        raise ValueError("%d scores but %d labels" % (len(scores), len(labels)))
    if not np.all((labels == 0) | (labels == 1)):
        raise ValueError("labels must be 0 or 1")
    return scores, labels.astype(bool)


def auc_pair_counts(scores, labels):
    """
    Return ``(wins, n_pos, n_neg)`` where ``wins`` counts positive-negative pairs with a higher
    positive score, ties counting one half.  ``wins`` is computed from the rank sum of the positives.

        >>> auc_pair_counts([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1])
        (3.0, 2, 2)

    """
    scores, labels = _prepare(scores, labels)
    n_pos = int(labels.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0:
        return 0.0, 0, n_neg
    ranks = rankdata(scores)
    wins = float(ranks[labels].sum()) - n_pos * (n_pos + 1) / 2.0
    return wins, n_pos, n_neg


def auc(scores, labels):
    """
    Area under the ROC curve, the probability that a random positive is scored above a random
    negative with ties counting one half.

    :param scores: real scores
    :param labels: ``0`` or ``1`` per score
    :raises DegenerateLabels: if one class is absent

        >>> auc([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]), auc([0.5] * 4, [1, 0, 1, 0])
        (1.0, 0.5)
        >>> auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1])
        0.75

    """
    wins, n_pos, n_neg = auc_pair_counts(scores, labels)
    if n_pos == 0 or n_neg == 0:
        raise DegenerateLabels("AUC needs both classes but got %d positives and %d negatives" % (n_pos, n_neg))
    return wins / (n_pos * n_neg)


def turn_bucket(turn, buckets=TURN_BUCKETS):
    """
    Bucket label of ``turn``: the turn itself up to ``buckets``, ``"30+"`` beyond.

        >>> turn_bucket(7), turn_bucket(31)
        ('7', '30+')

    """
    return str(turn) if turn <= buckets else "%d+" % buckets


def per_turn_auc(scores, labels, turns, buckets=TURN_BUCKETS):
    """
    AUC per turn bucket.  Buckets containing a single class are omitted.

    :returns: a list of ``TurnAuc(bucket, auc, n)`` in turn order

    """
    scores, labels = _prepare(scores, labels)
    turns = np.asarray(turns).ravel()
    rows = []
    for b in range(1, buckets + 2):
        if b <= buckets:
            mask = turns == b
        else:
            mask = turns > buckets
        s, y = scores[mask], labels[mask]
        if y.all() or not y.any():
            continue
        rows.append(TurnAuc(turn_bucket(b if b <= buckets else buckets + 1, buckets), auc(s, y), int(mask.sum())))
    return rows


def auc_report(scores, labels, turns, buckets=TURN_BUCKETS):
    """
    Overall and per-turn AUC.
    """
    wins, n_pos, n_neg = auc_pair_counts(scores, labels)
    return AucReport(auc(scores, labels), per_turn_auc(scores, labels, turns, buckets), n_pos, n_neg)


def accuracy(scores, labels, threshold=0.5):
    """
    Fraction of scores on the correct side of ``threshold``.

        >>> accuracy([0.9, 0.2, 0.6], [1, 0, 0])
        0.6666666666666666

    """
    scores, labels = _prepare(scores, labels)
    return float(np.mean((scores > threshold) == labels))


def wilson_interval(wins, n, confidence=0.95):
    """
    Wilson score interval of a win rate.

        >>> low, high = wilson_interval(50, 100)
        >>> round(low, 4), round(high, 4)
        (0.4038, 0.5962)

    """
    if n == 0:
        return 0.0, 1.0
    z = norm.ppf(0.5 + confidence / 2.0)
    p = wins / float(n)
    denominator = 1.0 + z * z / n
    centre = (p + z * z / (2.0 * n)) / denominator
    spread = z * np.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denominator
    low = 0.0 if wins == 0 else max(0.0, centre - spread)
    high = 1.0 if wins == n else min(1.0, centre + spread)
    return float(low), float(high)


def per_turn_table(rows):
    """
    Per-turn AUC rows as an ordered dictionary of columns, ready for ``pandas.DataFrame``.
    """
    return OrderedDict(
        [("turn", [r.bucket for r in rows]), ("auc", [r.auc for r in rows]), ("n", [r.n for r in rows])]
    )
