"""Teacher-forced training with backpropagation through time.

Plain gradient descent with global-norm clipping. ``sequence_loss`` runs
the forward pass only, which is what the finite-difference gradient check
perturbs; ``loss_and_grads`` must agree with it analytically.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .model import (
    END,
    START,
    Seq2SeqConfig,
    Seq2SeqModel,
    _StackState,
    attention,
    build_vocab,
    encode_with_state,
    log_softmax,
    lstm_cell_backward,
    lstm_cell_forward,
    softmax,
    text_to_ids,
)


@dataclass
class TrainPair:
    source: list[int]
    target: list[int]  # end-marker terminated

    def validate(self, config: Seq2SeqConfig) -> None:
        if not self.source or not self.target:
            raise ValueError("source and target must be nonempty")
        if len(self.source) > config.max_len or len(self.target) > config.max_len:
            raise ValueError("sequence longer than max_len")
        v = config.vocab_size
        if any(not 0 <= s < v for s in self.source + self.target):
            raise ValueError("symbol id out of range")


def make_pair(config: Seq2SeqConfig, source_text: str, target_text: str) -> TrainPair:
    end_id = config.vocab.index(END)
    source = text_to_ids(source_text, config)[: config.max_len]
    target = text_to_ids(target_text, config)[: config.max_len - 1] + [end_id]
    pair = TrainPair(source=source, target=target)
    pair.validate(config)
    return pair


def load_pairs(path: str | Path, mode: str = "char") -> tuple[Seq2SeqConfig, list[TrainPair]]:
    """Read tab-separated source/target lines and build a fresh config+vocab."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            source_text, target_text = line.split("\t", 1)
            rows.append((source_text, target_text))
    if not rows:
        raise ValueError(f"no pairs in {path}")
    vocab = build_vocab([t for row in rows for t in row], mode)
    config = Seq2SeqConfig(mode=mode, vocab=vocab)
    return config, [make_pair(config, s, t) for s, t in rows]


def _decoder_forward(model: Seq2SeqModel, pair: TrainPair, enc_tops, enc_state):
    """Teacher-forced decode; returns per-step losses and caches for backward."""
    config = model.config
    start_id = config.vocab.index(START)
    inputs = [start_id] + pair.target[:-1]
    state = enc_state.copy()
    steps = []
    losses = []
    for sym_in, sym_out in zip(inputs, pair.target):
        x = model.params["emb"][sym_in]
        caches = []
        inp = x
        for layer in range(config.layers):
            wx = model.params[f"dec{layer}.wx"]
            wh = model.params[f"dec{layer}.wh"]
            b = model.params[f"dec{layer}.b"]
            h, c, cache = lstm_cell_forward(wx, wh, b, inp, state.h[layer], state.c[layer])
            state.h[layer] = h
            state.c[layer] = c
            caches.append(cache)
            inp = h
        h_top = inp
        weights, context = attention(h_top, enc_tops)
        concat = np.concatenate([h_top, context])
        logits = model.params["out.w"] @ concat + model.params["out.b"]
        logp = log_softmax(logits)
        losses.append(-logp[sym_out])
        steps.append((sym_in, sym_out, caches, h_top, weights, context, concat, softmax(logits)))
    return losses, steps


def sequence_loss(model: Seq2SeqModel, pair: TrainPair) -> float:
    """Mean teacher-forced cross entropy per target symbol (forward only)."""
    pair.validate(model.config)
    enc_tops, enc_state, _ = encode_with_state(model, pair.source)
    losses, _ = _decoder_forward(model, pair, enc_tops, enc_state)
    return float(np.mean(losses))


def loss_and_grads(model: Seq2SeqModel, pair: TrainPair):
    """Analytic gradients of ``sequence_loss`` for every parameter."""
    pair.validate(model.config)
    config = model.config
    layers = config.layers
    hidden = config.hidden

    enc_tops, enc_state, enc_caches = encode_with_state(model, pair.source)
    losses, steps = _decoder_forward(model, pair, enc_tops, enc_state)
    loss = float(np.mean(losses))

    grads = {name: np.zeros_like(arr) for name, arr in model.params.items()}
    n_steps = len(steps)
    d_enc_tops = np.zeros_like(enc_tops)
    dh_carry = [np.zeros(hidden) for _ in range(layers)]
    dc_carry = [np.zeros(hidden) for _ in range(layers)]

    for sym_in, sym_out, caches, h_top, weights, context, concat, probs in reversed(steps):
        dlogits = probs.copy()
        dlogits[sym_out] -= 1.0
        dlogits /= n_steps
        grads["out.w"] += np.outer(dlogits, concat)
        grads["out.b"] += dlogits
        dconcat = model.params["out.w"].T @ dlogits
        dh_top = dconcat[:hidden].copy()
        dcontext = dconcat[hidden:]

        # attention backward: context = weights @ enc_tops, weights = softmax(enc_tops @ h_top)
        dweights = enc_tops @ dcontext
        dscores = weights * (dweights - weights @ dweights)
        dh_top += enc_tops.T @ dscores
        d_enc_tops += np.outer(dscores, h_top) + np.outer(weights, dcontext)

        dfrom_above = dh_top
        for layer in reversed(range(layers)):
            dh = dfrom_above + dh_carry[layer]
            dc = dc_carry[layer]
            dx, dh_prev, dc_prev, (dwx, dwh, db) = lstm_cell_backward(
                model.params[f"dec{layer}.wx"], model.params[f"dec{layer}.wh"], caches[layer], dh, dc
            )
            grads[f"dec{layer}.wx"] += dwx
            grads[f"dec{layer}.wh"] += dwh
            grads[f"dec{layer}.b"] += db
            dh_carry[layer] = dh_prev
            dc_carry[layer] = dc_prev
            dfrom_above = dx
        grads["emb"][sym_in] += dfrom_above

    # The decoder's initial state is the encoder's final state per layer.
    for t in reversed(range(len(pair.source))):
        dfrom_above = d_enc_tops[t]
        for layer in reversed(range(layers)):
            dh = dfrom_above + dh_carry[layer]
            dc = dc_carry[layer]
            dx, dh_prev, dc_prev, (dwx, dwh, db) = lstm_cell_backward(
                model.params[f"enc{layer}.wx"],
                model.params[f"enc{layer}.wh"],
                enc_caches[t][layer],
                dh,
                dc,
            )
            grads[f"enc{layer}.wx"] += dwx
            grads[f"enc{layer}.wh"] += dwh
            grads[f"enc{layer}.b"] += db
            dh_carry[layer] = dh_prev
            dc_carry[layer] = dc_prev
            dfrom_above = dx
        grads["emb"][pair.source[t]] += dfrom_above

    return loss, grads


def global_norm(grads: dict[str, np.ndarray]) -> float:
    return float(np.sqrt(sum(float((g * g).sum()) for g in grads.values())))


def train_step(model: Seq2SeqModel, pair: TrainPair, learning_rate: float | None = None) -> float:
    """One SGD step with global-norm clipping; returns the pre-update loss."""
    if learning_rate is None:
        learning_rate = model.config.learning_rate
    loss, grads = loss_and_grads(model, pair)
    norm = global_norm(grads)
    clip = model.config.clip_norm
    scale = clip / norm if clip > 0 and norm > clip else 1.0
    for name, grad in grads.items():
        model.params[name] -= learning_rate * scale * grad
    return loss


def train_corpus(
    model: Seq2SeqModel,
    pairs: list[TrainPair],
    steps: int,
    learning_rate: float | None = None,
) -> list[float]:
    """Round-robin over the corpus for ``steps`` updates; returns the losses."""
    if not pairs:
        raise ValueError("no training pairs")
    losses = []
    for step in range(steps):
        losses.append(train_step(model, pairs[step % len(pairs)], learning_rate))
    return losses
