"""Label-smoothed cross-entropy and its exact gradients.

Backpropagation is written out by hand against the forward pass in
``model``; correctness is contracted against central finite differences
in the tests, so every term here must stay an exact derivative.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..corpus import BOS_ID, EOS_ID
from ..text import Sentence
from .model import (
    NeuralModel,
    decoder_step,
    encode_source,
    log_softmax,
    source_ids,
    target_ids,
)


def zero_grads(m: NeuralModel) -> dict[str, np.ndarray]:
    return {k: np.zeros_like(v) for k, v in m.params.items()}


def _lstm_backward(
    W: np.ndarray,
    cache: dict,
    dh: np.ndarray,
    dc_carry: np.ndarray,
    gW: np.ndarray,
    gb: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Returns (dx, dh_prev, dc_prev); accumulates into gW/gb."""
    i, f, o, g = cache["i"], cache["f"], cache["o"], cache["g"]
    c, c_prev, xh = cache["c"], cache["c_prev"], cache["xh"]
    d = dh.shape[0]
    tanh_c = np.tanh(c)
    do = dh * tanh_c
    dc = dc_carry + dh * o * (1.0 - tanh_c ** 2)
    di = dc * g
    dg = dc * i
    df = dc * c_prev
    dc_prev = dc * f
    dz = np.concatenate(
        [di * i * (1 - i), df * f * (1 - f), do * o * (1 - o), dg * (1 - g ** 2)]
    )
    gW += np.outer(dz, xh)
    gb += dz
    dxh = W.T @ dz
    return dxh[: dxh.shape[0] - d], dxh[-d:], dc_prev


def sequence_loss_and_grad(
    m: NeuralModel,
    src_ids: list[int],
    tgt_ids: list[int],
    label_smoothing: float,
    grads: dict[str, np.ndarray],
    scale: float,
) -> float:
    """One teacher-forced sequence; grads accumulate scaled by ``scale``."""
    p = m.params
    d = m.dims
    vt = len(m.tgt_vocab)

    enc = encode_source(m, src_ids)
    inputs = [BOS_ID] + list(tgt_ids)
    outputs = list(tgt_ids) + [EOS_ID]

    h, c = enc["s0"], np.zeros(d)
    caches = []
    dlogits_steps = []
    loss = 0.0
    for t, y_prev in enumerate(inputs):
        logits, h, c, cache = decoder_step(m, enc, y_prev, h, c)
        logp = log_softmax(logits)
        q = np.full(vt, label_smoothing / vt)
        q[outputs[t]] += 1.0 - label_smoothing
        loss += -float(q @ logp)
        dlogits_steps.append((np.exp(logp) - q) * scale)
        caches.append(cache)

    dH = np.zeros_like(enc["H"])
    dh_carry = np.zeros(d)
    dc_carry = np.zeros(d)
    for t in reversed(range(len(inputs))):
        cache = caches[t]
        dlogits = dlogits_steps[t]
        grads["out_W"] += np.outer(dlogits, cache["readout"])
        grads["out_b"] += dlogits
        dreadout = p["out_W"].T @ dlogits
        dh = dreadout[:d] + dh_carry
        dctx = dreadout[d:].copy()

        dx, dh_prev_lstm, dc_prev = _lstm_backward(
            p["dec_W"], cache["lstm"], dh, dc_carry, grads["dec_W"], grads["dec_b"]
        )
        grads["tgt_emb"][cache["y_prev"]] += dx[:d]
        dctx += dx[d:]

        att = cache["att"]
        alpha, tanh_val, h_prev = att["alpha"], att["tanh_val"], att["h_prev"]
        dalpha = enc["H"] @ dctx
        dH += np.outer(alpha, dctx)
        de = alpha * (dalpha - float(alpha @ dalpha))
        grads["att_v"] += tanh_val.T @ de
        dpre = np.outer(de, p["att_v"]) * (1.0 - tanh_val ** 2)
        grads["att_U"] += dpre.T @ enc["H"]
        dH += dpre @ p["att_U"]
        dq = dpre.sum(axis=0)
        grads["att_W"] += np.outer(dq, h_prev)
        grads["att_b"] += dq
        dh_prev_att = p["att_W"].T @ dq

        dh_carry = dh_prev_lstm + dh_prev_att
        dc_carry = dc_prev

    # decoder init state from the mean annotation
    ds0_pre = dh_carry * (1.0 - enc["s0"] ** 2)
    grads["init_W"] += np.outer(ds0_pre, enc["mean"])
    grads["init_b"] += ds0_pre
    dH += (p["init_W"].T @ ds0_pre)[None, :] / len(src_ids)

    # encoder BPTT, both directions
    S = len(src_ids)
    dX = np.zeros((S, d))
    dh_rec = np.zeros(d)
    dc_rec = np.zeros(d)
    for t in reversed(range(S)):
        dh = dH[t, :d] + dh_rec
        dx, dh_rec, dc_rec = _lstm_backward(
            p["enc_fwd_W"], enc["fwd_caches"][t], dh, dc_rec,
            grads["enc_fwd_W"], grads["enc_fwd_b"],
        )
        dX[t] += dx
    dh_rec = np.zeros(d)
    dc_rec = np.zeros(d)
    for t in range(S):
        dh = dH[t, d:] + dh_rec
        dx, dh_rec, dc_rec = _lstm_backward(
            p["enc_bwd_W"], enc["bwd_caches"][t], dh, dc_rec,
            grads["enc_bwd_W"], grads["enc_bwd_b"],
        )
        dX[t] += dx
    for t, idx in enumerate(src_ids):
        grads["src_emb"][idx] += dX[t]
    return loss


def loss_and_grad(
    m: NeuralModel,
    batch: Sequence[tuple[Sentence, Sentence]],
    label_smoothing: float = 0.1,
) -> tuple[float, dict[str, np.ndarray]]:
    """Mean label-smoothed cross-entropy per target token, with gradients.

    The batch holds (source, target) subword sentences; averaging is over
    target tokens (EOS included), so duplicating the batch changes nothing.
    """
    if not batch:
        raise ValueError("empty batch")
    pairs = [(source_ids(m, s), target_ids(m, t)) for s, t in batch]
    total_tokens = sum(len(t) + 1 for _, t in pairs)
    grads = zero_grads(m)
    loss = 0.0
    for src, tgt in pairs:
        if not src:
            raise ValueError("empty source sequence in batch")
        loss += sequence_loss_and_grad(
            m, src, tgt, label_smoothing, grads, 1.0 / total_tokens
        )
    return loss / total_tokens, grads
