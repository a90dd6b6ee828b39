# -*- coding: utf-8 -*-
"""
Plot per-turn AUC curves and loss histories.

``matplotlib`` is only imported when a plot is drawn.

..  moduleauthor:: The cardsearch developers

"""

import pandas as pd


def plot_per_turn_auc(source, basename="per-turn-auc", extension="png", dpi=300, min_examples=1):
    """
    Plot the AUC of every dataset against the turn bucket.

    :param source: a per-turn CSV file as written by ``write_per_turn_csv`` or a dictionary
        name -> ``AucReport``
    :param basename: graphics filename basename (may contain full path)
    :param extension: graphics filename extension/type
    :param dpi: resolution
    :param min_examples: skip buckets with fewer states
    :returns: the filename written

    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from cardsearch.tools.metrics import per_turn_table

    if isinstance(source, dict):
        frames = []
        for name, report in source.items():
            df = pd.DataFrame(per_turn_table(report.per_turn))
            df.insert(0, "dataset", name)
            frames.append(df)
        df = pd.concat(frames, ignore_index=True)
    else:
        df = pd.read_csv(source, dtype={"turn": str})

    fig, ax = plt.subplots()
    for name, group in df[df["n"] >= min_examples].groupby("dataset", sort=False):
        ax.plot(range(len(group)), group["auc"].values, marker="o", label=name)
        ax.set_xticks(range(len(group)))
        ax.set_xticklabels(group["turn"].values, rotation=90, fontsize=6)
    ax.axhline(0.5, color="lightgray", linestyle="--")
    ax.set_xlabel("turn")
    ax.set_ylabel("AUC")
    ax.set_ylim(0.0, 1.0)
    ax.legend(loc="lower right")

    fullname = "%s.%s" % (basename, extension)
    fig.savefig(fullname, dpi=dpi)
    plt.close(fig)
    return fullname


def plot_history(histories, basename="loss", extension="png", dpi=300):
    """
    Plot loss histories, a dictionary name -> list of per-epoch losses.

    :returns: the filename written

    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots()
    for name, history in histories.items():
        ax.plot(range(1, len(history) + 1), history, label=name)
    ax.set_xlabel("epoch")
    ax.set_ylabel("loss")
    ax.legend(loc="upper right")

    fullname = "%s.%s" % (basename, extension)
    fig.savefig(fullname, dpi=dpi)
    plt.close(fig)
    return fullname
