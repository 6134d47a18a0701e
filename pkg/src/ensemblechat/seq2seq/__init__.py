"""Neural reply generation: seq2seq LSTM with dot-product attention."""

from .model import (
    END,
    MARKERS,
    REPLY_TEMPERATURES,
    START,
    UNK,
    Seq2SeqConfig,
    Seq2SeqModel,
    build_vocab,
    decode_step,
    encode,
    generate,
    ids_to_text,
    init_model,
    load_model,
    neural_reply,
    save_model,
    text_to_ids,
)
from .train import (
    TrainPair,
    global_norm,
    load_pairs,
    loss_and_grads,
    make_pair,
    sequence_loss,
    train_corpus,
    train_step,
)

__all__ = [
    "END",
    "MARKERS",
    "REPLY_TEMPERATURES",
    "START",
    "UNK",
    "Seq2SeqConfig",
    "Seq2SeqModel",
    "build_vocab",
    "decode_step",
    "encode",
    "generate",
    "ids_to_text",
    "init_model",
    "load_model",
    "neural_reply",
    "save_model",
    "text_to_ids",
    "TrainPair",
    "global_norm",
    "load_pairs",
    "loss_and_grads",
    "make_pair",
    "sequence_loss",
    "train_corpus",
    "train_step",
]
