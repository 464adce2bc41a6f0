"""Adaptive-moment training with a fixed learning rate."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..corpus import ParallelCorpus, UNK_ID
from .gradients import loss_and_grad
from .model import NeuralModel


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.0002
    batch_size: int = 60
    label_smoothing: float = 0.1
    max_updates: int = 1000
    seed: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not 0 <= self.label_smoothing < 1:
            raise ValueError("label_smoothing must be in [0, 1)")


def _check_coverage(m: NeuralModel, corpus: ParallelCorpus) -> None:
    for src, tgt in corpus:
        for tok in src:
            if m.src_vocab.id_of(tok) == UNK_ID and tok != m.src_vocab.token_of(UNK_ID):
                raise ValueError(f"source subword not in vocabulary: {tok!r}")
        for tok in tgt:
            if m.tgt_vocab.id_of(tok) == UNK_ID and tok != m.tgt_vocab.token_of(UNK_ID):
                raise ValueError(f"target subword not in vocabulary: {tok!r}")


def train(
    m: NeuralModel, corpus: ParallelCorpus, cfg: TrainConfig
) -> tuple[NeuralModel, list[float]]:
    """Run max_updates Adam steps over shuffled batches; returns loss trace.

    The corpus must already be subword-encoded with the model's
    vocabularies; an out-of-vocabulary subword is an error.  The input
    model is left untouched.
    """
    _check_coverage(m, corpus)
    model = m.copy()
    if cfg.max_updates == 0:
        return model, []

    rng = np.random.default_rng(cfg.seed)
    pairs = list(corpus)
    mom = {k: np.zeros_like(v) for k, v in model.params.items()}
    var = {k: np.zeros_like(v) for k, v in model.params.items()}
    trace: list[float] = []
    order: list[int] = []
    step = 0
    while step < cfg.max_updates:
        if not order:
            order = list(rng.permutation(len(pairs)))
        batch_idx = order[: cfg.batch_size]
        order = order[cfg.batch_size :]
        batch = [pairs[i] for i in batch_idx]
        loss, grads = loss_and_grad(model, batch, cfg.label_smoothing)
        step += 1
        for k, g in grads.items():
            mom[k] = cfg.beta1 * mom[k] + (1 - cfg.beta1) * g
            var[k] = cfg.beta2 * var[k] + (1 - cfg.beta2) * g * g
            m_hat = mom[k] / (1 - cfg.beta1 ** step)
            v_hat = var[k] / (1 - cfg.beta2 ** step)
            model.params[k] -= cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.eps)
        trace.append(loss)
    return model, trace
