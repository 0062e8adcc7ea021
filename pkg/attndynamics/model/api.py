# flake8: noqa
from .params import ModelParams, load_checkpoint, save_checkpoint
from .transformer import (
    AttentionOutput,
    attend,
    attention_score,
    attention_weights,
    batch_attention,
    forward,
    predict,
    sign,
    softmax_lipschitz_gap,
    token_score
)
