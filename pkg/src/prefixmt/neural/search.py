"""Beam search and prefix-constrained beam search over the neural model."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..bpe import bpe_decode, bpe_encode, is_continuation
from ..corpus import BOS_ID, EOS_ID, PAD_ID
from ..text import Sentence
from .model import NeuralModel, decoder_step, encode_source, log_softmax, source_ids

NEG_INF = float("-inf")


@dataclass(frozen=True)
class BeamConfig:
    beam_size: int = 6
    max_output_len: int = 80

    def __post_init__(self):
        if self.beam_size < 1:
            raise ValueError("beam_size must be >= 1")


@dataclass(frozen=True)
class NeuralHypothesis:
    tokens: Sentence  # word level
    score: float  # sum of chosen per-step log-probs, unnormalized


@dataclass
class _Beam:
    ids: tuple[int, ...]  # generated target ids, BOS excluded
    logp: float
    h: np.ndarray
    c: np.ndarray
    finished: bool = False

    def length(self) -> int:
        return max(len(self.ids), 1)


def _continuation_ids(m: NeuralModel) -> list[int]:
    marker = m.bpe.marker if m.bpe else "##"
    return [
        i for i, tok in enumerate(m.tgt_vocab.tokens()) if is_continuation(tok, marker)
    ]


def _to_subwords(m: NeuralModel, words: Sentence) -> Sentence:
    return bpe_encode(m.bpe, words) if m.bpe else tuple(words)


def _search(
    m: NeuralModel,
    src_subwords: Sentence,
    forced_ids: list[int],
    cfg: BeamConfig,
    mask_first_free: bool,
) -> _Beam:
    """Forced-then-free beam search; returns the best finished beam.

    During the forced phase only the single constrained path is scored.
    Finished beams are ranked by length-normalized log-probability.
    """
    enc = encode_source(m, source_ids(m, src_subwords))
    h, c = enc["s0"], np.zeros(m.dims)
    logp_total = 0.0
    y_prev = BOS_ID
    for fid in forced_ids:
        logits, h, c, _ = decoder_step(m, enc, y_prev, h, c)
        logp_total += float(log_softmax(logits)[fid])
        y_prev = fid
    beams = [_Beam(tuple(forced_ids), logp_total, h, c)]
    finished: list[_Beam] = []
    banned_always = [BOS_ID, PAD_ID]
    cont_ids = _continuation_ids(m) if mask_first_free else []

    first_free = True
    while beams and max(len(b.ids) for b in beams) < cfg.max_output_len:
        candidates: list[tuple[float, int, int]] = []  # (-logp, token, beam idx)
        steps = []
        for bi, beam in enumerate(beams):
            y = beam.ids[-1] if beam.ids else BOS_ID
            logits, h, c, _ = decoder_step(m, enc, y, beam.h, beam.c)
            logp = log_softmax(logits)
            logp[banned_always] = NEG_INF
            if first_free and cont_ids:
                logp[cont_ids] = NEG_INF
            steps.append((h, c, logp))
            top = np.argsort(-logp, kind="stable")[: cfg.beam_size]
            for tok in top:
                if logp[tok] > NEG_INF:
                    candidates.append((-(beam.logp + float(logp[tok])), int(tok), bi))
        candidates.sort()
        next_beams: list[_Beam] = []
        for neg, tok, bi in candidates[: cfg.beam_size]:
            h, c, logp = steps[bi]
            item = _Beam(beams[bi].ids + (tok,), -neg, h, c, finished=tok == EOS_ID)
            if item.finished:
                finished.append(item)
            else:
                next_beams.append(item)
        beams = next_beams
        first_free = False
        if len(finished) >= cfg.beam_size:
            break
    finished.extend(beams)  # length-capped leftovers
    if not finished:
        return _Beam(tuple(forced_ids), logp_total, h, c, finished=True)
    return max(finished, key=lambda b: (b.logp / b.length(), b.ids))


def _ids_to_words(m: NeuralModel, ids: tuple[int, ...]) -> Sentence:
    marker = m.bpe.marker if m.bpe else "##"
    subwords = tuple(
        m.tgt_vocab.token_of(i) for i in ids if i not in (BOS_ID, EOS_ID, PAD_ID)
    )
    return bpe_decode(subwords, marker)


def beam_decode(m: NeuralModel, x: Sentence, cfg: BeamConfig = BeamConfig()) -> NeuralHypothesis:
    """Length-normalized beam search, subword-decoded back to words."""
    src = _to_subwords(m, x)
    if not src:
        return NeuralHypothesis((), 0.0)
    best = _search(m, src, [], cfg, mask_first_free=False)
    return NeuralHypothesis(_ids_to_words(m, best.ids), best.logp)


def prefix_decode(
    m: NeuralModel, x: Sentence, prefix: Sentence, cfg: BeamConfig = BeamConfig()
) -> Sentence:
    """Best word-level suffix continuing a validated word-level prefix.

    The prefix is re-encoded to subwords and force-fed through the
    decoder; the first free step may not pick a continuation-marked
    subword, so the last validated word can never be extended.
    """
    src = _to_subwords(m, x)
    if not src:
        return ()
    prefix_sub = _to_subwords(m, tuple(prefix))
    forced = [m.tgt_vocab.id_of(t) for t in prefix_sub]
    if len(forced) > cfg.max_output_len:
        raise ValueError(
            f"prefix length {len(forced)} exceeds max_output_len {cfg.max_output_len}"
        )
    best = _search(m, src, forced, cfg, mask_first_free=bool(prefix))
    suffix_ids = best.ids[len(forced):]
    return _ids_to_words(m, suffix_ids)
