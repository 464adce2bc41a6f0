"""Attention encoder-decoder over subwords, in plain float64 numpy.

Single-layer bidirectional LSTM encoder, additive attention queried by
the previous decoder state, single-layer LSTM decoder, readout over
[decoder state; context].  Sized for desk-scale experiments; the
literature-standard large configuration is kept as a documented
reference (REFERENCE_DIMS, and REFERENCE_MERGES in the bpe module).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..bpe import BpeModel
from ..corpus import BOS_ID, EOS_ID, PAD_ID, UNK_ID, Vocabulary

DEFAULT_DIMS = 64
REFERENCE_DIMS = 512

PARAM_SHAPES = {
    "src_emb": ("Vs", "d"),
    "tgt_emb": ("Vt", "d"),
    "enc_fwd_W": ("4d", "2d"),
    "enc_fwd_b": ("4d",),
    "enc_bwd_W": ("4d", "2d"),
    "enc_bwd_b": ("4d",),
    "init_W": ("d", "2d"),
    "init_b": ("d",),
    "att_W": ("d", "d"),
    "att_U": ("d", "2d"),
    "att_v": ("d",),
    "att_b": ("d",),
    "dec_W": ("4d", "4d"),
    "dec_b": ("4d",),
    "out_W": ("Vt", "3d"),
    "out_b": ("Vt",),
}


@dataclass
class NeuralModel:
    dims: int
    src_vocab: Vocabulary
    tgt_vocab: Vocabulary
    params: dict[str, np.ndarray]
    bpe: BpeModel | None = None

    def copy(self) -> "NeuralModel":
        return NeuralModel(
            self.dims,
            self.src_vocab,
            self.tgt_vocab,
            {k: v.copy() for k, v in self.params.items()},
            self.bpe,
        )

    def save(self, path: str | Path) -> None:
        meta = {
            "format": "prefixmt-nmt v1",
            "dims": self.dims,
            "src_tokens": self.src_vocab.tokens(),
            "tgt_tokens": self.tgt_vocab.tokens(),
            "bpe_merges": list(self.bpe.merges) if self.bpe else None,
            "bpe_marker": self.bpe.marker if self.bpe else None,
        }
        arrays = dict(self.params)
        arrays["__meta__"] = np.frombuffer(
            json.dumps(meta, ensure_ascii=False).encode("utf-8"), dtype=np.uint8
        )
        np.savez(path, **arrays)

    @classmethod
    def load(cls, path: str | Path) -> "NeuralModel":
        with np.load(path) as data:
            meta = json.loads(bytes(data["__meta__"]).decode("utf-8"))
            if meta.get("format") != "prefixmt-nmt v1":
                raise ValueError(f"{path}: unknown checkpoint format")
            params = {k: data[k] for k in data.files if k != "__meta__"}
        n_reserved = 4
        src_vocab = Vocabulary(meta["src_tokens"][n_reserved:])
        tgt_vocab = Vocabulary(meta["tgt_tokens"][n_reserved:])
        bpe = None
        if meta["bpe_merges"] is not None:
            bpe = BpeModel(
                tuple((a, b) for a, b in meta["bpe_merges"]), marker=meta["bpe_marker"]
            )
        return cls(meta["dims"], src_vocab, tgt_vocab, params, bpe)


def init_model(
    dims: int,
    vocabs: tuple[Vocabulary, Vocabulary],
    seed: int,
    bpe: BpeModel | None = None,
) -> NeuralModel:
    """Deterministic uniform initialization, range scaled by fan-in."""
    if dims < 2:
        raise ValueError("dims must be >= 2")
    rng = np.random.default_rng(seed)
    src_vocab, tgt_vocab = vocabs
    sizes = {
        "d": dims,
        "2d": 2 * dims,
        "3d": 3 * dims,
        "4d": 4 * dims,
        "Vs": len(src_vocab),
        "Vt": len(tgt_vocab),
    }
    params: dict[str, np.ndarray] = {}
    for name, shape_spec in PARAM_SHAPES.items():
        shape = tuple(sizes[s] for s in shape_spec)
        if name.endswith("_b"):
            params[name] = np.zeros(shape)
        else:
            fan_in = shape[-1]
            bound = 1.0 / np.sqrt(fan_in)
            params[name] = rng.uniform(-bound, bound, size=shape)
    return NeuralModel(dims, src_vocab, tgt_vocab, params, bpe)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-x))


def lstm_step(
    W: np.ndarray, b: np.ndarray, x: np.ndarray, h: np.ndarray, c: np.ndarray
) -> tuple[np.ndarray, np.ndarray, dict]:
    """One LSTM cell step; the cache carries what backprop needs."""
    d = h.shape[0]
    xh = np.concatenate([x, h])
    z = W @ xh + b
    i = _sigmoid(z[:d])
    f = _sigmoid(z[d : 2 * d])
    o = _sigmoid(z[2 * d : 3 * d])
    g = np.tanh(z[3 * d :])
    c_new = f * c + i * g
    h_new = o * np.tanh(c_new)
    cache = {"xh": xh, "i": i, "f": f, "o": o, "g": g, "c_prev": c, "c": c_new}
    return h_new, c_new, cache


def encode_source(m: NeuralModel, src_ids: list[int]) -> dict:
    """Bidirectional encoding; returns annotations and decoder init state."""
    p = m.params
    d = m.dims
    X = p["src_emb"][src_ids]
    S = len(src_ids)
    h = np.zeros(d)
    c = np.zeros(d)
    fwd_h, fwd_caches = [], []
    for t in range(S):
        h, c, cache = lstm_step(p["enc_fwd_W"], p["enc_fwd_b"], X[t], h, c)
        fwd_h.append(h)
        fwd_caches.append(cache)
    h = np.zeros(d)
    c = np.zeros(d)
    bwd_h: list[np.ndarray] = [None] * S
    bwd_caches: list[dict] = [None] * S
    for t in reversed(range(S)):
        h, c, cache = lstm_step(p["enc_bwd_W"], p["enc_bwd_b"], X[t], h, c)
        bwd_h[t] = h
        bwd_caches[t] = cache
    H = np.concatenate([np.stack(fwd_h), np.stack(bwd_h)], axis=1)  # (S, 2d)
    mean = H.mean(axis=0)
    s0_pre = p["init_W"] @ mean + p["init_b"]
    s0 = np.tanh(s0_pre)
    UH = H @ p["att_U"].T  # (S, d), reused every decoder step
    return {
        "ids": src_ids,
        "X": X,
        "H": H,
        "UH": UH,
        "mean": mean,
        "s0": s0,
        "fwd_caches": fwd_caches,
        "bwd_caches": bwd_caches,
    }


def attention(m: NeuralModel, enc: dict, h_prev: np.ndarray) -> tuple[np.ndarray, dict]:
    p = m.params
    q = p["att_W"] @ h_prev + p["att_b"]
    tanh_val = np.tanh(enc["UH"] + q)  # (S, d)
    e = tanh_val @ p["att_v"]
    e = e - e.max()
    alpha = np.exp(e)
    alpha /= alpha.sum()
    ctx = alpha @ enc["H"]  # (2d,)
    cache = {"tanh_val": tanh_val, "alpha": alpha, "h_prev": h_prev}
    return ctx, cache


def decoder_step(
    m: NeuralModel,
    enc: dict,
    y_prev: int,
    h: np.ndarray,
    c: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, dict]:
    """One teacher-forced or search step: returns (logits, h, c, cache)."""
    p = m.params
    ctx, att_cache = attention(m, enc, h)
    emb = p["tgt_emb"][y_prev]
    x = np.concatenate([emb, ctx])
    h_new, c_new, lstm_cache = lstm_step(p["dec_W"], p["dec_b"], x, h, c)
    readout = np.concatenate([h_new, ctx])
    logits = p["out_W"] @ readout + p["out_b"]
    cache = {
        "att": att_cache,
        "lstm": lstm_cache,
        "y_prev": y_prev,
        "ctx": ctx,
        "readout": readout,
        "h_new": h_new,
    }
    return logits, h_new, c_new, cache


def log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max()
    return shifted - np.log(np.exp(shifted).sum())


def target_ids(m: NeuralModel, subwords) -> list[int]:
    ids = []
    for tok in subwords:
        idx = m.tgt_vocab.id_of(tok)
        if idx == UNK_ID and tok != m.tgt_vocab.token_of(UNK_ID):
            raise ValueError(f"subword not in target vocabulary: {tok!r}")
        ids.append(idx)
    return ids


def source_ids(m: NeuralModel, subwords) -> list[int]:
    return [m.src_vocab.id_of(tok) for tok in subwords]
