# -*- coding: utf-8 -*-
"""
Feed-forward and recurrent networks over a flat parameter vector.

    >>> net = Network(2, [{"kind": "dense", "width": 1, "activation": "sigmoid"}])
    >>> net.params[:] = [1.0, -1.0, 0.0]
    >>> round(float(net.forward(np.array([[3.0, 1.0]]))[0, 0]), 6)
    0.880797

Losses are computed from the pre-activations of the output layer: binary cross entropy for sigmoid
heads, categorical cross entropy for softmax heads.

Networks are stored in a small binary container:

=========  ======================================================================
bytes      content
=========  ======================================================================
4          magic ``CSNN``
2          format version, little-endian unsigned
1          bytes per stored parameter, 4 or 8
1          reserved, zero
4          length ``n`` of the JSON header, little-endian unsigned
n          UTF-8 JSON header with sorted keys: input width, layer specs, metadata
8          number of parameters ``m``, little-endian unsigned
4m or 8m   parameters as little-endian IEEE floats
=========  ======================================================================

..  moduleauthor:: The cardsearch developers

"""

import json
import logging
import struct
from collections import OrderedDict

import numpy as np
from scipy.special import expit, logsumexp, softmax

from cardsearch.features.encoding import SEQUENCE_WIDTH, STATE_WIDTH
from cardsearch.game.actions import N_ACTIONS
from cardsearch.nn.layers import LSTM, Dense, Dropout, activate
from cardsearch.util import ShapeMismatch

logger = logging.getLogger(__name__)

MAGIC = b"CSNN"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sHBBI")
_COUNT = struct.Struct("<Q")
_DTYPES = {4: "<f4", 8: "<f8"}
# sigmoid outputs stay inside (0, 1), also after a cast to float32
OUTPUT_EPS = 1e-7


class Network(object):
    """
    A stack of layers whose parameters live in one float64 vector ``params``.
    """

    def __init__(self, input_width, layers, seed=0, metadata=None):
        """
        :param input_width: width of one input row
        :param layers: list of layer specs ``{"kind": "dense"|"lstm"|"dropout", ...}``
        :param seed: seeds parameter initialisation and dropout masks
        :param metadata: dictionary stored alongside the parameters

        """
        self.input_width = int(input_width)
        self.layer_specs = [OrderedDict(sorted(spec.items())) for spec in layers]
        self.metadata = OrderedDict(metadata or ())
        self.training = False
        self.layers = self._build(self.layer_specs)
        self.params = np.zeros(sum(layer.n_params for layer in self.layers))
        self._bind()
        rng = np.random.default_rng(seed)
        for layer in self.layers:
            layer.initialize(rng)
        self.dropout_rng = np.random.default_rng(rng.integers(2 ** 63))

    def _build(self, specs):
        if not specs:
            raise ValueError("a network needs at least one layer")
        recurrent = [i for i, spec in enumerate(specs) if spec["kind"] == "lstm"]
        shape = (None, self.input_width) if recurrent else (self.input_width,)
        layers = []
        for i, spec in enumerate(specs):
            kind = spec["kind"]
            if kind == "dense":
                layer = Dense(shape, spec["width"], spec.get("activation", "linear"))
            elif kind == "lstm":
                layer = LSTM(shape, spec["width"], sequences=any(j > i for j in recurrent))
            elif kind == "dropout":
                layer = Dropout(shape, spec["rate"])
            else:
                raise ValueError("unknown layer kind '%s'" % kind)
            layers.append(layer)
            shape = layer.out_shape
        if not isinstance(layers[-1], Dense):
            raise ValueError("the last layer must be dense")
        return layers

    def _bind(self):
        offset = 0
        for layer in self.layers:
            layer.bind(self.params[offset : offset + layer.n_params])
            offset += layer.n_params

    @property
    def n_params(self):
        return len(self.params)

    @property
    def output_width(self):
        return self.layers[-1].width

    @property
    def head(self):
        return self.layers[-1].activation

    @property
    def recurrent(self):
        return any(isinstance(layer, LSTM) for layer in self.layers)

    @property
    def default_loss(self):
        return "cce" if self.head == "softmax" else "bce"

    def train_mode(self):
        self.training = True
        return self

    def eval_mode(self):
        self.training = False
        return self

    def check_input(self, x):
        x = np.asarray(x, dtype=np.float64)
        ndim = 3 if self.recurrent else 2
        if x.ndim != ndim or x.shape[-1] != self.input_width:
            expected = "(batch, steps, %d)" if ndim == 3 else "(batch, %d)"
            raise ShapeMismatch(
                "expected input of shape %s but got %s" % (expected % self.input_width, x.shape)
            )
        return x

    def _forward(self, x):
        caches = []
        for layer in self.layers[:-1]:
            x, cache = layer.forward(x, train=self.training, rng=self.dropout_rng)
            caches.append(cache)
        head = self.layers[-1]
        z = head.pre_activation(x)
        caches.append((x, z, None))
        return z, caches

    def logits(self, x):
        """
        Pre-activations of the output layer.
        """
        return self._forward(self.check_input(x))[0]

    def forward(self, x):
        """
        Outputs for the batch ``x``, ``[batch, width]`` or ``[batch, steps, width]`` for recurrent
        networks.

        :raises ShapeMismatch: if ``x`` does not fit the network

        """
        out = activate(self.logits(x), self.head)
        if self.head == "sigmoid":
            out = np.clip(out, OUTPUT_EPS, 1.0 - OUTPUT_EPS)
        return out

    __call__ = forward

    def loss_and_gradient(self, x, y, loss=None):
        """
        Mean loss over the batch and its gradient w.r.t. ``params``.

        :param x: inputs
        :param y: targets; probabilities of shape ``[batch]`` or ``[batch, width]`` for ``"bce"``,
            class indices ``[batch]`` or one-hot rows for ``"cce"``
        :param loss: ``"bce"``, ``"cce"`` or ``None`` for the head's natural loss

        """
        x = self.check_input(x)
        loss = loss or self.default_loss
        z, caches = self._forward(x)
        value, dz = _loss(z, y, loss)
        return value, self._backward(caches, dz)

    def backward(self, x, y, loss=None):
        """
        Gradient of the mean loss w.r.t. ``params``.
        """
        return self.loss_and_gradient(x, y, loss)[1]

    def loss(self, x, y, loss=None):
        return _loss(self.logits(x), y, loss or self.default_loss)[0]

    def _backward(self, caches, dz):
        grads = []
        head = self.layers[-1]
        dx, g = head.backward(caches[-1], dz, skip_activation=True)
        grads.append(g)
        for layer, cache in zip(reversed(self.layers[:-1]), reversed(caches[:-1])):
            dx, g = layer.backward(cache, dx)
            grads.append(g)
        return np.concatenate(grads[::-1])

    def __getstate__(self):
        return {"header": self.header(), "params": self.params, "training": self.training}

    def __setstate__(self, state):
        header = state["header"]
        self.__init__(header["input_width"], header["layers"], metadata=header["metadata"])
        self.params[:] = state["params"]
        self.training = state["training"]

    def copy(self):
        other = Network(self.input_width, self.layer_specs, metadata=self.metadata)
        other.params[:] = self.params
        other.training = self.training
        return other

    def header(self):
        return OrderedDict(
            [
                ("input_width", self.input_width),
                ("layers", self.layer_specs),
                ("metadata", self.metadata),
                ("n_params", self.n_params),
            ]
        )

    def quantize(self, nbytes=4):
        """
        Round ``params`` in place to the precision stored by ``save``.
        """
        self.params[:] = self.params.astype(_DTYPES[nbytes]).astype(np.float64)

    def save(self, filename, nbytes=4):
        """
        Write the network to ``filename``.

        The in-memory parameters are rounded to the stored precision first, so a loaded copy
        computes exactly the same outputs.

        :param filename: target path
        :param nbytes: bytes per parameter, 4 or 8

        """
        if nbytes not in _DTYPES:
            raise ValueError("parameters are stored with 4 or 8 bytes, not %s" % nbytes)
        self.quantize(nbytes)
        header = json.dumps(self.header(), sort_keys=True, separators=(",", ":")).encode("utf-8")
        with open(filename, "wb") as fh:
            fh.write(_HEADER.pack(MAGIC, FORMAT_VERSION, nbytes, 0, len(header)))
            fh.write(header)
            fh.write(_COUNT.pack(self.n_params))
            fh.write(self.params.astype(_DTYPES[nbytes]).tobytes())
        logger.debug("wrote %d parameters to %s", self.n_params, filename)

    def __repr__(self):
        return "<Network(%d -> %s, %d params)>" % (
            self.input_width,
            " -> ".join("%s(%s)" % (s["kind"], s.get("width", s.get("rate"))) for s in self.layer_specs),
            self.n_params,
        )


def _loss(z, y, loss):
    batch = z.shape[0]
    y = np.asarray(y)
    if loss == "bce":
        y = y.astype(np.float64).reshape(z.shape)
        value = np.mean(np.maximum(z, 0.0) - z * y + np.log1p(np.exp(-np.abs(z))))
        dz = (expit(z) - y) / z.size
        return float(value), dz
    if loss == "cce":
        if y.ndim == 1:
            onehot = np.zeros(z.shape)
            onehot[np.arange(batch), y.astype(np.int64)] = 1.0
        else:
            onehot = y.astype(np.float64).reshape(z.shape)
        value = np.mean(logsumexp(z, axis=-1) - (z * onehot).sum(axis=-1))
        dz = (softmax(z, axis=-1) - onehot) / batch
        return float(value), dz
    raise ValueError("unknown loss '%s'" % loss)


def load_network(filename):
    """
    Read a network written by ``Network.save``.

    :raises ValueError: if the file is not a network file

    """
    with open(filename, "rb") as fh:
        data = fh.read()
    if len(data) < _HEADER.size:
        raise ValueError("'%s' is too short to be a network file" % filename)
    magic, version, nbytes, _, length = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise ValueError("'%s' is not a network file" % filename)
    if version != FORMAT_VERSION:
        raise ValueError("unsupported network format version %d" % version)
    if nbytes not in _DTYPES:
        raise ValueError("unsupported parameter size %d" % nbytes)
    offset = _HEADER.size
    header = json.loads(data[offset : offset + length].decode("utf-8"), object_pairs_hook=OrderedDict)
    offset += length
    (count,) = _COUNT.unpack_from(data, offset)
    offset += _COUNT.size
    params = np.frombuffer(data, dtype=_DTYPES[nbytes], count=count, offset=offset)

    net = Network(header["input_width"], header["layers"], metadata=header["metadata"])
    if count != net.n_params:
        raise ValueError("expected %d parameters but the file holds %d" % (net.n_params, count))
    net.params[:] = params.astype(np.float64)
    return net


def value_network(input_width=STATE_WIDTH, hidden=(128, 64), seed=0):
    """
    Two hidden relu layers and a sigmoid head predicting the probability of a win.

        >>> value_network(hidden=(8, 4)).n_params
        3025

    """
    layers = [OrderedDict([("kind", "dense"), ("width", w), ("activation", "relu")]) for w in hidden]
    layers.append(OrderedDict([("kind", "dense"), ("width", 1), ("activation", "sigmoid")]))
    return Network(input_width, layers, seed=seed, metadata={"role": "value"})


def policy_network(input_width=SEQUENCE_WIDTH, hidden=64, depth=2, dropout=0.2, seed=0):
    """
    Stacked LSTM layers with dropout and a softmax head over all actions.

        >>> policy_network(hidden=4, depth=2, seed=0)
        <Network(414 -> lstm(4) -> dropout(0.2) -> lstm(4) -> dropout(0.2) -> dense(42), 7058 params)>

    """
    layers = []
    for i in range(depth):
        layers.append(OrderedDict([("kind", "lstm"), ("width", hidden)]))
        if dropout:
            layers.append(OrderedDict([("kind", "dropout"), ("rate", dropout)]))
    layers.append(OrderedDict([("kind", "dense"), ("width", N_ACTIONS), ("activation", "softmax")]))
    return Network(input_width, layers, seed=seed, metadata={"role": "policy"})
