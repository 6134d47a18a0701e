"""Sequence-to-sequence encoder/decoder with dot-product attention.

Stacked LSTM encoder, stacked LSTM decoder initialized from the encoder's
final states, parameter-free dot-product attention over the encoder's
top-layer states, and a softmax projection over ``[hidden ; context]``.
Character mode and word mode share this code path; they differ only in the
vocabulary and the default hidden size.

All math is float64 numpy; the gradient check in training depends on it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..hashing import Lcg64, derive_seed
from ..nlu.forest import TopicDistribution
from ..session import Candidate

START, END, UNK = "<s>", "</s>", "<unk>"
MARKERS = (START, END, UNK)

INIT_SCALE = 0.08

#: generation temperatures for the three ensemble candidates.
REPLY_TEMPERATURES = (0.7, 0.9, 1.1)

DEFAULT_HIDDEN = {"char": 128, "word": 500}


@dataclass
class Seq2SeqConfig:
    mode: str = "char"
    layers: int = 2
    hidden: int | None = None
    vocab: list[str] = field(default_factory=list)
    max_len: int = 128
    learning_rate: float = 0.1
    clip_norm: float = 5.0
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("char", "word"):
            raise ValueError(f"mode must be 'char' or 'word', got {self.mode!r}")
        if self.hidden is None:
            self.hidden = DEFAULT_HIDDEN[self.mode]
        if self.layers < 1 or self.hidden < 1:
            raise ValueError("layers and hidden must be >= 1")
        for marker in MARKERS:
            if marker not in self.vocab:
                raise ValueError(f"vocab must contain marker {marker!r}")

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)

    def symbol_id(self, symbol: str) -> int:
        try:
            return self.vocab.index(symbol)
        except ValueError:
            return self.vocab.index(UNK)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "layers": self.layers,
            "hidden": self.hidden,
            "vocab": list(self.vocab),
            "max_len": self.max_len,
            "learning_rate": self.learning_rate,
            "clip_norm": self.clip_norm,
            "seed": self.seed,
        }


def build_vocab(texts: list[str], mode: str) -> list[str]:
    """Markers followed by the sorted symbol set of the corpus."""
    symbols: set[str] = set()
    for text in texts:
        symbols.update(_split_symbols(text, mode))
    return [*MARKERS, *sorted(symbols)]


def _split_symbols(text: str, mode: str) -> list[str]:
    if mode == "char":
        return list(text)
    return text.lower().split()


def text_to_ids(text: str, config: Seq2SeqConfig) -> list[int]:
    unk = config.vocab.index(UNK)
    index = {s: i for i, s in enumerate(config.vocab)}
    return [index.get(s, unk) for s in _split_symbols(text, config.mode)]


def ids_to_text(ids: list[int], config: Seq2SeqConfig) -> str:
    marker_ids = {config.vocab.index(m) for m in MARKERS}
    symbols = [config.vocab[i] for i in ids if i not in marker_ids]
    return ("" if config.mode == "char" else " ").join(symbols)


@dataclass
class Seq2SeqModel:
    config: Seq2SeqConfig
    params: dict[str, np.ndarray]

    def param_names(self) -> list[str]:
        return sorted(self.params)


def _param_shapes(config: Seq2SeqConfig) -> list[tuple[str, tuple[int, ...]]]:
    """Parameter names and shapes in fixed creation order."""
    v, h = config.vocab_size, config.hidden
    shapes: list[tuple[str, tuple[int, ...]]] = [("emb", (v, h))]
    for side in ("enc", "dec"):
        for layer in range(config.layers):
            shapes.append((f"{side}{layer}.wx", (4 * h, h)))
            shapes.append((f"{side}{layer}.wh", (4 * h, h)))
            shapes.append((f"{side}{layer}.b", (4 * h,)))
    shapes.append(("out.w", (v, 2 * h)))
    shapes.append(("out.b", (v,)))
    return shapes


def init_model(config: Seq2SeqConfig) -> Seq2SeqModel:
    """Parameters drawn uniformly from [-0.08, 0.08] via the seeded LCG."""
    rng = Lcg64(config.seed)
    params = {}
    for name, shape in _param_shapes(config):
        size = int(np.prod(shape))
        flat = np.empty(size, dtype=np.float64)
        for i in range(size):
            flat[i] = rng.uniform(-INIT_SCALE, INIT_SCALE)
        params[name] = flat.reshape(shape)
    return Seq2SeqModel(config=config, params=params)


# ------------------------------------------------------------------ math


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def softmax(x: np.ndarray) -> np.ndarray:
    shifted = x - np.max(x)
    e = np.exp(shifted)
    return e / e.sum()


def log_softmax(x: np.ndarray) -> np.ndarray:
    shifted = x - np.max(x)
    return shifted - np.log(np.exp(shifted).sum())


def lstm_cell_forward(wx, wh, b, x, h_prev, c_prev):
    """One LSTM step. Gate layout in z: input, forget, output, cell."""
    hidden = h_prev.shape[0]
    z = wx @ x + wh @ h_prev + b
    i = _sigmoid(z[:hidden])
    f = _sigmoid(z[hidden : 2 * hidden])
    o = _sigmoid(z[2 * hidden : 3 * hidden])
    g = np.tanh(z[3 * hidden :])
    c = f * c_prev + i * g
    h = o * np.tanh(c)
    cache = (x, h_prev, c_prev, i, f, o, g, c)
    return h, c, cache


def lstm_cell_backward(wx, wh, cache, dh, dc):
    """Backward through one LSTM step; returns (dx, dh_prev, dc_prev, param grads)."""
    x, h_prev, c_prev, i, f, o, g, c = cache
    tanh_c = np.tanh(c)
    do = dh * tanh_c
    dc_total = dc + dh * o * (1.0 - tanh_c * tanh_c)
    di = dc_total * g
    df = dc_total * c_prev
    dg = dc_total * i
    dc_prev = dc_total * f
    dz = np.concatenate(
        [di * i * (1.0 - i), df * f * (1.0 - f), do * o * (1.0 - o), dg * (1.0 - g * g)]
    )
    dwx = np.outer(dz, x)
    dwh = np.outer(dz, h_prev)
    db = dz
    dx = wx.T @ dz
    dh_prev = wh.T @ dz
    return dx, dh_prev, dc_prev, (dwx, dwh, db)


class _StackState:
    """Per-layer (h, c) pairs for one side of the model."""

    def __init__(self, layers: int, hidden: int):
        self.h = [np.zeros(hidden) for _ in range(layers)]
        self.c = [np.zeros(hidden) for _ in range(layers)]

    def copy(self) -> "_StackState":
        out = _StackState(0, 0)
        out.h = [h.copy() for h in self.h]
        out.c = [c.copy() for c in self.c]
        return out


def _stack_step(model: Seq2SeqModel, side: str, state: _StackState, x: np.ndarray):
    """Run one time step through the stacked LSTM; mutates ``state``."""
    caches = []
    inp = x
    for layer in range(model.config.layers):
        wx = model.params[f"{side}{layer}.wx"]
        wh = model.params[f"{side}{layer}.wh"]
        b = model.params[f"{side}{layer}.b"]
        h, c, cache = lstm_cell_forward(wx, wh, b, inp, state.h[layer], state.c[layer])
        state.h[layer] = h
        state.c[layer] = c
        caches.append(cache)
        inp = h
    return inp, caches  # top-layer hidden, per-layer caches


def encode_with_state(model: Seq2SeqModel, source: list[int]):
    """Top-layer encoder states (T, H) plus the final stack state and caches."""
    if not source:
        raise ValueError("source must be nonempty")
    v = model.config.vocab_size
    if any(not 0 <= s < v for s in source):
        raise ValueError("symbol id out of range")
    state = _StackState(model.config.layers, model.config.hidden)
    tops = []
    caches = []
    for sym in source:
        top, step_caches = _stack_step(model, "enc", state, model.params["emb"][sym])
        tops.append(top)
        caches.append(step_caches)
    return np.stack(tops), state, caches


def encode(model: Seq2SeqModel, source: list[int]) -> np.ndarray:
    """Per-position top-layer hidden vectors of the encoder, shape (T, hidden)."""
    tops, _, _ = encode_with_state(model, source)
    return tops


def attention(h_top: np.ndarray, encoder_states: np.ndarray):
    """Dot-product attention; returns (weights, context)."""
    scores = encoder_states @ h_top
    weights = softmax(scores)
    context = weights @ encoder_states
    return weights, context


def decode_step(
    model: Seq2SeqModel,
    decoder_state: _StackState,
    prev_symbol: int,
    encoder_states: np.ndarray,
):
    """One decode step: returns (distribution over vocab, new state).

    ``decoder_state`` is not mutated; attention runs over the encoder's
    top-layer states and the output distribution is
    softmax(W [hidden ; context] + b).
    """
    state = decoder_state.copy()
    h_top, _ = _stack_step(model, "dec", state, model.params["emb"][prev_symbol])
    _, context = attention(h_top, encoder_states)
    logits = model.params["out.w"] @ np.concatenate([h_top, context]) + model.params["out.b"]
    return softmax(logits), state


def generate(
    model: Seq2SeqModel,
    source: list[int],
    temperature: float,
    max_len: int | None = None,
    rng_seed: int = 0,
) -> str:
    """Sample a reply; temperature 0 means greedy argmax decoding."""
    if temperature < 0:
        raise ValueError("temperature must be >= 0")
    config = model.config
    if max_len is None:
        max_len = config.max_len
    encoder_states, enc_state, _ = encode_with_state(model, source)
    state = enc_state.copy()
    rng = Lcg64(rng_seed)
    end_id = config.vocab.index(END)
    prev = config.vocab.index(START)
    out_ids: list[int] = []
    for _ in range(max_len):
        dist, state = decode_step(model, state, prev, encoder_states)
        if temperature == 0:
            sym = int(np.argmax(dist))
        else:
            scaled = np.log(np.maximum(dist, 1e-300)) / temperature
            probs = softmax(scaled)
            u = rng.float01()
            cum = np.cumsum(probs)
            sym = int(np.searchsorted(cum, u, side="right"))
            sym = min(sym, len(dist) - 1)
        if sym == end_id:
            break
        out_ids.append(sym)
        prev = sym
    return ids_to_text(out_ids, config)


def neural_reply(
    models: dict[str, Seq2SeqModel],
    topic_dist: TopicDistribution,
    resolved_input: str,
    rng_seed: int,
) -> list[Candidate]:
    """Up to three nonempty candidates from the argmax-topic model.

    Falls back to the General model when no model exists for the topic;
    a General model is required.
    """
    if "General" not in models:
        raise ValueError("a General model is required")
    topic = topic_dist.argmax_topic()
    model = models.get(topic, models["General"])
    source = text_to_ids(resolved_input, model.config)
    if not source:
        source = [model.config.vocab.index(UNK)]
    candidates = []
    for idx, temp in enumerate(REPLY_TEMPERATURES):
        text = generate(
            model,
            source,
            temperature=temp,
            max_len=model.config.max_len,
            rng_seed=derive_seed(rng_seed, f"neural:{idx}"),
        )
        if text:
            candidates.append(Candidate.make(text, "neural"))
    return candidates


# ---------------------------------------------------------- serialization


def save_model(model: Seq2SeqModel, path: str | Path) -> None:
    doc = {
        "config": model.config.to_dict(),
        "params": {
            name: {"shape": list(arr.shape), "data": arr.ravel().tolist()}
            for name, arr in model.params.items()
        },
    }
    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def load_model(path: str | Path) -> Seq2SeqModel:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    config = Seq2SeqConfig(**doc["config"])
    params = {}
    for name, spec in doc["params"].items():
        params[name] = np.array(spec["data"], dtype=np.float64).reshape(spec["shape"])
    expected = dict(_param_shapes(config))
    for name, shape in expected.items():
        if name not in params or params[name].shape != shape:
            raise ValueError(f"model file parameter {name!r} missing or misshaped")
    return Seq2SeqModel(config=config, params=params)
