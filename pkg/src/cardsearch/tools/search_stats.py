# -*- coding: utf-8 -*-
"""
Collecting traces from tree searches.

A tracer records CPU and wall time per labelled context and arbitrary observations such as rollout
lengths.  The search code always talks to a tracer; ``dummy_tracer`` discards everything::

    >>> tracer = SearchTreeTracer(None)
    >>> with tracer.context("search"):
    ...     tracer.record("rollout", 12)
    ...     tracer.record("rollout", 30)
    >>> tracer.trace.find("search")["rollout"].max
    30

..  moduleauthor:: The cardsearch developers

"""

import copy
import logging
import time
from collections import OrderedDict, deque
from contextlib import contextmanager
from math import log


def _format_value(v, round_bound):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        try:
            if isinstance(v, bool):
                raise TypeError
            v = float(v)
        except (TypeError, ValueError):
            return None
    if abs(v) > round_bound or (isinstance(v, float) and abs(v) >= round_bound):
        return "%8s" % ("%s2^%.1f" % ("-" if v < 0 else "", log(abs(v), 2)))
    if isinstance(v, int):
        return "%8d" % v
    if 0 <= v < 10:
        return "%8.6f" % v
    if -10 < v < 0:
        return "%8.5f" % v
    return "%8.3f" % v


def pretty_dict(d, keyword_width=None, round_bound=9999, suppress_length=128):
    """
    Return a one-line representation of the dictionary ``d`` for log files.

    :param d: a dictionary
    :param keyword_width: width allocated for keywords
    :param round_bound: values beyond this bound are shown as ``2^x``
    :param suppress_length: replace values whose string form is longer than this by ``'...'``

    >>> str(pretty_dict(OrderedDict([("iterations", 100), ("q", 0.75), ("walltime", 12.5)])))
    '{"iterations":      100,  "q": 0.750000,  "walltime":   12.500}'

    """
    items = []
    for key, value in d.items():
        key = '"%*s"' % (keyword_width, key) if keyword_width else '"%s"' % key
        text = _format_value(value, round_bound)
        if text is None:
            text = str(value)
            if len(text) > suppress_length:
                text = "'...'"
        items.append("%s: %s" % (key, text))
    return "{" + ",  ".join(items) + "}"


class Accumulator(object):
    """
    Running minimum, maximum, sum, mean and variance of a stream of observations.

        >>> v = Accumulator(4, repr="avg")
        >>> v += 8
        >>> v.min, v.max, v.sum, float(v)
        (4, 8, 12, 6.0)
        >>> v.variance
        4.0

    """

    def __init__(self, value, repr="sum", count=True, bessel_correction=False):
        """
        :param value: first value
        :param repr: one of ``"min"``, ``"max"``, ``"avg"``, ``"sum"`` or ``"variance"``; picks
            what ``float()`` and ``str()`` return
        :param count: count ``value`` as an observation
        :param bessel_correction: apply Bessel's correction to the variance

        """
        self.low = self.high = self.total = value
        self.squares = value * value
        self.n = int(bool(count))
        self.kind = repr
        self.unbiased = bessel_correction

    def add(self, value):
        """
        Record ``value`` and return ``self``.
        """
        self.low, self.high = min(self.low, value), max(self.high, value)
        self.total += value
        self.squares += value * value
        self.n += 1
        return self

    min = property(lambda self: self.low)
    max = property(lambda self: self.high)
    sum = property(lambda self: self.total)
    count = property(lambda self: self.n)

    @property
    def avg(self):
        return self.total / self.n

    mean = avg

    @property
    def variance(self):
        v = self.squares / self.n - self.avg ** 2
        return v * self.n / (self.n - 1) if self.unbiased else v

    def __add__(self, other):
        """
        ``acc + None`` is a copy, ``acc + acc`` merges both and ``acc + value`` records ``value``.

            >>> a = Accumulator(1.0, repr="max")
            >>> float(a + Accumulator(3.0, repr="max")), float(a + 2.0), float(a + None)
            (3.0, 2.0, 1.0)

        """
        merged = copy.copy(self)
        if other is None:
            return merged
        if not isinstance(other, Accumulator):
            return merged.add(other)
        if other.kind != self.kind:
            raise ValueError("cannot merge a '%s' accumulator into a '%s' one" % (other.kind, self.kind))
        merged.low, merged.high = min(self.low, other.low), max(self.high, other.high)
        merged.total += other.total
        merged.squares += other.squares
        merged.n += other.n
        return merged

    __radd__ = __add__

    def __sub__(self, other):
        return float(self) - float(other)

    def __float__(self):
        return float(getattr(self, self.kind))

    def __str__(self):
        return str(getattr(self, self.kind))

    __repr__ = __str__


class Tracer(object):
    """
    Base tracer, records nothing.
    """

    def __init__(self, instance, verbosity=False, max_depth=16):
        """
        :param instance: the search object being traced
        :param verbosity: log per-context summaries, integers ≥ 0 are also accepted
        :param max_depth: keep contexts up to this depth below the root

        """
        self.instance = instance
        self.verbosity = int(verbosity)
        self.max_depth = max_depth

    @contextmanager
    def context(self, *args, **kwds):
        """
        Enter the context labelled ``args`` (a single label or a tuple) for the duration of a
        ``with`` block.
        """
        self.enter(args[0] if len(args) == 1 else args, **kwds)
        try:
            yield self
        finally:
            self.exit(**kwds)

    def enter(self, label, **kwds):
        pass

    def exit(self, **kwds):
        pass

    def record(self, key, value):
        """
        Record an observation ``value`` under ``key`` in the current context.
        """
        pass


dummy_tracer = Tracer(None)


class Node(object):
    """
    A labelled tree whose nodes carry a dictionary of statistics.
    """

    def __init__(self, label, parent=None, data=None):
        """
        :param label: a string or tuple
        :param parent: parent node or ``None``
        :param data: initial statistics

        """
        self.label = label
        self.parent = parent
        self.data = OrderedDict(data or ())
        self.children = []

    def add_child(self, child):
        child.parent = self
        self.children.append(child)
        return child

    def child(self, label):
        """
        Return the child labelled ``label``, creating it if needed.

            >>> root = Node("decision")
            >>> root.child("simulation") is root.child("simulation")
            True

        """
        existing = [c for c in self.children if c.label == label]
        return existing[0] if existing else self.add_child(Node(label))

    def __str__(self):
        return '{"%s": %s}' % (self.label, pretty_dict(self.data))

    __repr__ = __str__

    def report(self, indentation=0, depth=None):
        """
        Return an indented multi-line representation of this tree.

        :param indentation: spaces added on the left
        :param depth: stop at this depth

            >>> root = Node("decision")
            >>> root.child("simulation").data["rollouts"] = 100
            >>> print(root.report())
            {"decision": {}}
              {"simulation": {"rollouts":      100}}

        """
        lines = [" " * indentation + str(self)]
        if depth != 0:
            below = None if depth is None else depth - 1
            lines.extend(c.report(indentation + 2, below) for c in self.children)
        return "\n".join(lines)

    def __iter__(self):
        """
        Depth-first iteration over this tree, this node first.
        """
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def sum(self, tag, include_self=True, label=None):
        """
        Return the sum over all values tagged ``tag`` in this tree.

        :param tag: a key of ``data``
        :param include_self: include this node
        :param label: only consider nodes with this label

            >>> root = Node("game")
            >>> root.child(("decision", 0)).data["iterations"] = 50
            >>> root.child(("decision", 1)).data["iterations"] = 70
            >>> root.sum("iterations")
            120

        """
        total = 0
        for node in self:
            if node is self and not include_self:
                continue
            if label is None or node.label == label:
                total = total + node.data.get(tag, 0)
        return total

    def find(self, label, raise_keyerror=False):
        """
        Return the first node below this one labelled ``label`` in breadth-first order.

        :param label: a label
        :param raise_keyerror: raise ``KeyError`` if nothing is found instead of returning ``None``

        """
        queue = deque(self.children)
        while queue:
            node = queue.popleft()
            if node.label == label:
                return node
            queue.extend(node.children)
        if raise_keyerror:
            raise KeyError("no node labelled %r below %s" % (label, self))
        return None

    def __getitem__(self, tag):
        return self.data[tag]

    @property
    def level(self):
        """
        Distance to the root.
        """
        return 0 if self.parent is None else self.parent.level + 1

    def accumulate(self, key, filter=lambda node: True, repr="avg"):
        """
        Return an ``Accumulator`` over all values stored under ``key`` in this tree.

            >>> root = Node("game")
            >>> root.child(("decision", 0)).data["iterations"] = 50
            >>> root.child(("decision", 1)).data["iterations"] = 70
            >>> root.accumulate("iterations").avg
            60.0

        """
        acc = Accumulator(0, repr=repr, count=False)
        for node in self:
            if key in node.data and filter(node):
                acc += node.data[key]
        return acc


class SearchTreeTracer(Tracer):
    """
    Default tracer for tree searches: CPU and wall time per context, plus observations recorded
    through ``record``.  With ``verbosity`` set, a summary of every finished ``"search"`` context is
    logged.

        >>> tracer = SearchTreeTracer(None, max_depth=1)
        >>> for label in ("search", "iteration", "simulation"): tracer.enter(label)
        >>> for label in range(3): tracer.exit()
        >>> "simulation" in tracer.trace.report()
        False

    """

    CLOCKS = (("cputime", time.process_time), ("walltime", time.time))

    def __init__(self, instance, verbosity=False, root_label="mcts", start_clocks=False, max_depth=16):
        """
        :param instance: the search object being traced
        :param verbosity: log summaries
        :param root_label: label of the root node
        :param start_clocks: start timing the root node immediately
        :param max_depth: keep contexts up to this depth below the root

        """
        Tracer.__init__(self, instance, verbosity, max_depth)
        self.trace = self.current = Node(root_label)
        self.logger = logging.getLogger(__name__)
        if start_clocks:
            self.reenter()

    def enter(self, label, **kwds):
        self.current = self.current.child(label)
        self.reenter()

    def reenter(self, **kwds):
        """
        Restart the clocks of the current context.
        """
        data = self.current.data
        for key, clock in self.CLOCKS:
            data[key] = data.get(key, 0) + Accumulator(-clock(), repr="sum", count=False)

    def exit(self, **kwds):
        node = self.current
        for key, clock in self.CLOCKS:
            node.data[key] += clock()

        if self.verbosity and node.label == "search":
            keys = ("cputime", "walltime", "iterations", "simulations", "rollout")
            self.logger.info(pretty_dict(OrderedDict((k, node[k]) for k in keys if k in node.data)))

        # the root stays current
        if node.parent is not None:
            self.current = node.parent
            if node.level > self.max_depth:
                self.current.children.remove(node)

    def record(self, key, value):
        data = self.current.data
        data[key] = data[key] + value if key in data else Accumulator(value, repr="avg")


def normalize_tracer(tracer):
    """
    Normalize tracer inputs.

    :param tracer: ``True`` for ``SearchTreeTracer``, ``False`` for ``dummy_tracer`` or any other
        value for a custom tracer

        >>> normalize_tracer(True) is SearchTreeTracer, normalize_tracer(False) is dummy_tracer
        (True, True)

    """
    if tracer is True:
        return SearchTreeTracer
    if tracer is False:
        return dummy_tracer
    return tracer
