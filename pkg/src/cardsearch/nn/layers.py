# -*- coding: utf-8 -*-
"""
Layers of the network stack.

A layer owns no parameters itself: it is handed a view into the network's flat parameter vector.
``forward`` returns the output and a cache, ``backward`` turns the gradient of the output into the
gradients of the input and of the parameters.

..  moduleauthor:: The cardsearch developers

"""

from collections import OrderedDict

import numpy as np
from scipy.special import expit, softmax

ACTIVATIONS = ("relu", "tanh", "sigmoid", "linear", "softmax")


def activate(z, activation):
    """
    Apply ``activation`` to the pre-activations ``z``.

        >>> float(activate(np.array([2.0]), "sigmoid")[0])
        0.8807970779778823

    """
    if activation == "relu":
        return np.maximum(z, 0.0)
    if activation == "tanh":
        return np.tanh(z)
    if activation == "sigmoid":
        return expit(z)
    if activation == "softmax":
        return softmax(z, axis=-1)
    return z


def activation_gradient(z, a, activation, da):
    """
    Gradient w.r.t. the pre-activations given the gradient ``da`` of the activations ``a``.
    """
    if activation == "relu":
        return da * (z > 0)
    if activation == "tanh":
        return da * (1.0 - a * a)
    if activation == "sigmoid":
        return da * a * (1.0 - a)
    if activation == "softmax":
        return a * (da - (da * a).sum(axis=-1, keepdims=True))
    return da


class Layer(object):
    """
    Base class.  ``in_shape`` and ``out_shape`` exclude the batch dimension.
    """

    kind = None

    def __init__(self, in_shape):
        self.in_shape = tuple(in_shape)

    @property
    def out_shape(self):
        return self.in_shape

    @property
    def n_params(self):
        return 0

    def bind(self, params):
        """
        Attach the view ``params`` of length ``n_params``.
        """
        self.params = params

    def initialize(self, rng):
        pass

    def forward(self, x, train=False, rng=None):
        raise NotImplementedError

    def backward(self, cache, dy):
        raise NotImplementedError

    def spec(self):
        return OrderedDict([("kind", self.kind)])


class Dense(Layer):
    """
    Fully connected layer ``activation(x·W + b)`` on ``[batch, width]`` inputs.
    """

    kind = "dense"

    def __init__(self, in_shape, width, activation="linear"):
        Layer.__init__(self, in_shape)
        if len(self.in_shape) != 1:
            raise ValueError("dense layers take flat inputs but got shape %s" % (self.in_shape,))
        if width < 1:
            raise ValueError("width must be at least 1 but got %d" % width)
        if activation not in ACTIVATIONS:
            raise ValueError("unknown activation '%s'" % activation)
        self.width = width
        self.activation = activation

    @property
    def out_shape(self):
        return (self.width,)

    @property
    def n_params(self):
        return (self.in_shape[0] + 1) * self.width

    def bind(self, params):
        Layer.bind(self, params)
        n = self.in_shape[0] * self.width
        self.W = params[:n].reshape(self.in_shape[0], self.width)
        self.b = params[n:]

    def initialize(self, rng):
        bound = 1.0 / np.sqrt(self.in_shape[0])
        self.W[:] = rng.uniform(-bound, bound, self.W.shape)
        self.b[:] = 0.0

    def pre_activation(self, x):
        return x.dot(self.W) + self.b

    def forward(self, x, train=False, rng=None):
        z = self.pre_activation(x)
        a = activate(z, self.activation)
        return a, (x, z, a)

    def backward(self, cache, dy, skip_activation=False):
        """
        :param skip_activation: ``dy`` is the gradient of the pre-activations already

        """
        x, z, a = cache
        dz = dy if skip_activation else activation_gradient(z, a, self.activation, dy)
        dW = x.T.dot(dz)
        db = dz.sum(axis=0)
        return dz.dot(self.W.T), np.concatenate([dW.ravel(), db])

    def spec(self):
        return OrderedDict([("kind", self.kind), ("width", self.width), ("activation", self.activation)])


class LSTM(Layer):
    """
    Long short-term memory layer on ``[batch, steps, width]`` inputs.

    The weights form one ``[1 + width + hidden, 4·hidden]`` matrix whose first row is the bias; the
    column blocks are the cell input, input gate, forget gate and output gate.  With
    ``sequences=True`` the hidden state of every step is returned, otherwise only the last one.
    """

    kind = "lstm"

    def __init__(self, in_shape, hidden, sequences=False):
        Layer.__init__(self, in_shape)
        if len(self.in_shape) != 2:
            raise ValueError("recurrent layers take sequence inputs but got shape %s" % (self.in_shape,))
        if hidden < 1:
            raise ValueError("hidden width must be at least 1 but got %d" % hidden)
        self.hidden = hidden
        self.sequences = sequences

    @property
    def out_shape(self):
        if self.sequences:
            return (self.in_shape[0], self.hidden)
        return (self.hidden,)

    @property
    def n_params(self):
        return (1 + self.in_shape[1] + self.hidden) * 4 * self.hidden

    def bind(self, params):
        Layer.bind(self, params)
        self.W = params.reshape(1 + self.in_shape[1] + self.hidden, 4 * self.hidden)

    def initialize(self, rng):
        bound = 1.0 / np.sqrt(self.in_shape[1] + self.hidden)
        self.W[:] = rng.uniform(-bound, bound, self.W.shape)
        self.W[0, :] = 0.0

    def forward(self, x, train=False, rng=None):
        batch, steps, d = x.shape
        H = self.hidden
        W = self.W

        Hin = np.zeros((steps, batch, 1 + d + H))
        IFOG = np.zeros((steps, batch, 4 * H))
        IFOGf = np.zeros((steps, batch, 4 * H))
        C = np.zeros((steps, batch, H))
        Ct = np.zeros((steps, batch, H))
        Hout = np.zeros((steps, batch, H))

        for t in range(steps):
            Hin[t, :, 0] = 1.0
            Hin[t, :, 1 : d + 1] = x[:, t, :]
            if t > 0:
                Hin[t, :, d + 1 :] = Hout[t - 1]
            IFOG[t] = Hin[t].dot(W)
            IFOGf[t, :, :H] = np.tanh(IFOG[t, :, :H])
            IFOGf[t, :, H:] = expit(IFOG[t, :, H:])
            C[t] = IFOGf[t, :, :H] * IFOGf[t, :, H : 2 * H]
            if t > 0:
                C[t] += IFOGf[t, :, 2 * H : 3 * H] * C[t - 1]
            Ct[t] = np.tanh(C[t])
            Hout[t] = Ct[t] * IFOGf[t, :, 3 * H :]

        cache = (Hin, IFOGf, C, Ct, d)
        if self.sequences:
            return Hout.transpose(1, 0, 2).copy(), cache
        return Hout[-1].copy(), cache

    def backward(self, cache, dy):
        Hin, IFOGf, C, Ct, d = cache
        steps, batch, _ = Hin.shape
        H = self.hidden
        W = self.W

        dHout = np.zeros((steps, batch, H))
        if self.sequences:
            dHout[:] = dy.transpose(1, 0, 2)
        else:
            dHout[-1] = dy

        dW = np.zeros(W.shape)
        dIFOGf = np.zeros(IFOGf.shape)
        dIFOG = np.zeros(IFOGf.shape)
        dC = np.zeros(C.shape)
        dx = np.zeros((batch, steps, d))

        for t in reversed(range(steps)):
            dIFOGf[t, :, 3 * H :] = Ct[t] * dHout[t]
            dC[t] += (1.0 - Ct[t] ** 2) * (IFOGf[t, :, 3 * H :] * dHout[t])
            if t > 0:
                dIFOGf[t, :, 2 * H : 3 * H] = dC[t] * C[t - 1]
                dC[t - 1] += dC[t] * IFOGf[t, :, 2 * H : 3 * H]
            dIFOGf[t, :, :H] = dC[t] * IFOGf[t, :, H : 2 * H]
            dIFOGf[t, :, H : 2 * H] = dC[t] * IFOGf[t, :, :H]

            dIFOG[t, :, :H] = (1.0 - IFOGf[t, :, :H] ** 2) * dIFOGf[t, :, :H]
            y = IFOGf[t, :, H:]
            dIFOG[t, :, H:] = y * (1.0 - y) * dIFOGf[t, :, H:]

            dW += Hin[t].T.dot(dIFOG[t])
            dHin = dIFOG[t].dot(W.T)
            dx[:, t, :] = dHin[:, 1 : d + 1]
            if t > 0:
                dHout[t - 1] += dHin[:, d + 1 :]

        return dx, dW.ravel()

    def spec(self):
        return OrderedDict([("kind", self.kind), ("width", self.hidden)])


class Dropout(Layer):
    """
    Inverted dropout: in training mode every unit is zeroed with probability ``rate`` and the others
    are scaled by ``1/(1 - rate)``; in evaluation mode the layer is the identity.
    """

    kind = "dropout"

    def __init__(self, in_shape, rate):
        Layer.__init__(self, in_shape)
        if not 0.0 <= rate < 1.0:
            raise ValueError("dropout rate must be in [0,1) but got %s" % rate)
        self.rate = rate

    def forward(self, x, train=False, rng=None):
        if not train or self.rate == 0.0:
            return x, None
        mask = (rng.random(x.shape) >= self.rate) / (1.0 - self.rate)
        return x * mask, mask

    def backward(self, cache, dy):
        if cache is None:
            return dy, np.zeros(0)
        return dy * cache, np.zeros(0)

    def spec(self):
        return OrderedDict([("kind", self.kind), ("rate", self.rate)])
