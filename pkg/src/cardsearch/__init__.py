# flake8: noqa
from .util import (
    CardSearchError,
    ConfigError,
    DegenerateLabels,
    DivergedLoss,
    EmptyNode,
    EncodingMismatch,
    GameOver,
    IllegalAction,
    InvalidDeck,
    InvariantError,
    ShapeMismatch,
)

__version__ = "0.1.0"
