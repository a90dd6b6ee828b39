# flake8: noqa
from .layers import LSTM, Dense, Dropout
from .network import Network, load_network, policy_network, value_network
from .train import TrainParam, TrainResult, train
