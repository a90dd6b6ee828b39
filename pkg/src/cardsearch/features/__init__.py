# flake8: noqa
from .encoding import (
    ENCODING_VERSION,
    SEQUENCE_WIDTH,
    STATE_WIDTH,
    WINDOW,
    action_one_hot,
    column_names,
    encode_state,
    encode_states,
    layout,
    sequence_window,
)
