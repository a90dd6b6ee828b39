# -*- coding: utf-8 -*-
"""
Minibatch training.

    >>> from cardsearch.nn.network import Network
    >>> net = Network(2, [{"kind": "dense", "width": 1, "activation": "sigmoid"}], seed=1)
    >>> x = np.array([[1.0, 0.0], [0.0, 1.0]]); y = np.array([1.0, 0.0])
    >>> result = train(net, x, y, TrainParam(epochs=200, learning_rate=0.1, batch_size=2))
    >>> len(result.history), result.history[-1] < result.history[0]
    (200, True)

..  moduleauthor:: The cardsearch developers

"""

import logging
from collections import OrderedDict, namedtuple

import numpy as np

from cardsearch.util import ConfigError, DivergedLoss, ShapeMismatch

logger = logging.getLogger(__name__)

TrainResult = namedtuple("TrainResult", ("network", "history", "validation"))


class TrainParam(object):
    """
    Training parameters.
    """

    def __init__(
        self,
        optimizer="adam",
        learning_rate=1e-3,
        beta1=0.9,
        beta2=0.999,
        epsilon=1e-8,
        batch_size=64,
        epochs=10,
        seed=0,
        loss=None,
    ):
        """
        :param optimizer: ``"sgd"`` or ``"adam"``
        :param learning_rate: step size
        :param beta1: Adam first moment decay
        :param beta2: Adam second moment decay
        :param epsilon: Adam denominator offset
        :param batch_size: examples per update
        :param epochs: passes over the data
        :param seed: seeds the minibatch shuffle
        :param loss: ``"bce"``, ``"cce"`` or ``None`` for the network's natural loss

        """
        if optimizer not in ("sgd", "adam"):
            raise ConfigError("unknown optimizer '%s'" % optimizer)
        if not learning_rate > 0:
            raise ConfigError("learning rate must be positive but got %s" % learning_rate)
        if int(batch_size) < 1:
            raise ConfigError("batch size must be at least 1 but got %s" % batch_size)
        if int(epochs) < 0:
            raise ConfigError("epochs must be non-negative but got %s" % epochs)
        if loss not in (None, "bce", "cce"):
            raise ConfigError("unknown loss '%s'" % loss)
        self.optimizer = optimizer
        self.learning_rate = float(learning_rate)
        self.beta1 = float(beta1)
        self.beta2 = float(beta2)
        self.epsilon = float(epsilon)
        self.batch_size = int(batch_size)
        self.epochs = int(epochs)
        self.seed = int(seed)
        self.loss = loss

    def dict(self):
        d = OrderedDict()
        for key in ("optimizer", "learning_rate", "beta1", "beta2", "epsilon", "batch_size", "epochs", "seed", "loss"):
            d[key] = getattr(self, key)
        return d

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - set(cls().dict())
        if unknown:
            raise ConfigError("unknown training parameters %s" % sorted(unknown))
        return cls(**d)

    def __repr__(self):
        return "<TrainParam(%s)>" % ", ".join("%s=%s" % (k, v) for k, v in self.dict().items())


class SGD(object):
    def __init__(self, params, learning_rate):
        self.params = params
        self.learning_rate = learning_rate

    def step(self, grad):
        self.params -= self.learning_rate * grad


class Adam(object):
    def __init__(self, params, learning_rate, beta1=0.9, beta2=0.999, epsilon=1e-8):
        self.params = params
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.m = np.zeros_like(params)
        self.v = np.zeros_like(params)
        self.t = 0

    def step(self, grad):
        self.t += 1
        self.m = self.beta1 * self.m + (1 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1 - self.beta2) * grad * grad
        m_hat = self.m / (1 - self.beta1 ** self.t)
        v_hat = self.v / (1 - self.beta2 ** self.t)
        self.params -= self.learning_rate * m_hat / (np.sqrt(v_hat) + self.epsilon)


def optimizer_for(network, param):
    if param.optimizer == "sgd":
        return SGD(network.params, param.learning_rate)
    return Adam(network.params, param.learning_rate, param.beta1, param.beta2, param.epsilon)


def evaluate_loss(network, x, y, loss=None, batch_size=1024):
    """
    Mean loss of ``network`` in evaluation mode over ``(x, y)``.
    """
    training = network.training
    network.eval_mode()
    total, n = 0.0, len(y)
    for start in range(0, n, batch_size):
        idx = np.arange(start, min(start + batch_size, n))
        total += network.loss(x[idx], y[idx], loss) * len(idx)
    network.training = training
    return total / n


def train(network, x, y, param, validation=None):
    """
    Train ``network`` in place.

    :param network: a ``Network``
    :param x: inputs, any object supporting ``len`` and indexing with integer arrays
    :param y: targets
    :param param: a ``TrainParam``
    :param validation: optional ``(x, y)`` evaluated after every epoch
    :returns: ``TrainResult(network, history, validation)`` with the mean training loss and the
        validation loss of every epoch
    :raises DivergedLoss: if a loss or gradient stops being finite

    """
    n = len(y)
    if n == 0:
        raise ValueError("cannot train on an empty dataset")
    if len(x) != n:
        raise ShapeMismatch("%d inputs but %d targets" % (len(x), n))

    rng = np.random.default_rng(param.seed)
    optimizer = optimizer_for(network, param)
    history, validation_history = [], []

    for epoch in range(param.epochs):
        network.train_mode()
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, param.batch_size):
            idx = np.sort(order[start : start + param.batch_size])
            value, grad = network.loss_and_gradient(x[idx], y[idx], param.loss)
            if not np.isfinite(value) or not np.all(np.isfinite(grad)):
                network.eval_mode()
                raise DivergedLoss(
                    "loss diverged in epoch %d" % epoch,
                    OrderedDict(
                        [
                            ("epoch", epoch),
                            ("batch", start // param.batch_size),
                            ("loss", float(value)),
                            ("param_norm", float(np.linalg.norm(network.params))),
                            ("learning_rate", param.learning_rate),
                        ]
                    ),
                )
            optimizer.step(grad)
            total += value * len(idx)
        history.append(total / n)
        network.eval_mode()

        if validation is not None:
            validation_history.append(evaluate_loss(network, validation[0], validation[1], param.loss))
            logger.info("epoch %3d: loss %.6f, validation %.6f", epoch, history[-1], validation_history[-1])
        else:
            logger.info("epoch %3d: loss %.6f", epoch, history[-1])

    network.eval_mode()
    return TrainResult(network, history, validation_history)
