"""Minimum-error-rate tuning of the log-linear weights.

Accumulates n-best pools over rounds and runs exact coordinate line
search: per sentence the candidate scores are linear in the searched
weight, so the corpus BLEU is piecewise constant and the sweep over
upper-envelope breakpoints finds the true optimum of each coordinate.
"""

from __future__ import annotations

import random
from typing import Sequence

from ..corpus import ParallelCorpus
from ..metrics import BleuStats, bleu_from_stats, bleu_stats
from ..text import Sentence
from .decoder import FEATURE_NAMES, LogLinearWeights, decode
from .lm import NGramLanguageModel
from .phrases import PhraseTable

Candidate = tuple[tuple[str, ...], tuple[float, ...]]  # tokens, feature sums


def upper_envelope(lines: Sequence[tuple[float, float, int]]) -> list[tuple[float, int]]:
    """Segments of max(a + b*x) as [(x_from, line_index)], x ascending.

    Input triples are (intercept a, slope b, index); the first segment
    starts at -inf.
    """
    by_slope: dict[float, tuple[float, int]] = {}
    for a, b, idx in lines:
        cur = by_slope.get(b)
        if cur is None or (a, -idx) > (cur[0], -cur[1]):
            by_slope[b] = (a, idx)
    ordered = sorted((b, a, idx) for b, (a, idx) in by_slope.items())
    hull: list[tuple[float, float, float, int]] = []  # x_from, a, b, idx
    for b, a, idx in ordered:
        while hull:
            x_from, a0, b0, idx0 = hull[-1]
            x = (a0 - a) / (b - b0)
            if x <= x_from:
                hull.pop()
            else:
                break
        start = float("-inf") if not hull else x
        hull.append((start, a, b, idx))
    return [(x_from, idx) for x_from, _, _, idx in hull]


def _pool_bleu_at(
    pools: list[list[Candidate]],
    refs: list[Sentence],
    wvec: list[float],
) -> float:
    total = BleuStats()
    for pool, ref in zip(pools, refs):
        best_i, best_s = 0, float("-inf")
        for i, (_, feats) in enumerate(pool):
            s = sum(w * f for w, f in zip(wvec, feats))
            if s > best_s + 1e-12:
                best_i, best_s = i, s
        total = total + bleu_stats(pool[best_i][0], ref)
    return bleu_from_stats(total)


def line_search(
    pools: list[list[Candidate]],
    refs: list[Sentence],
    wvec: list[float],
    dim: int,
) -> tuple[float | None, float]:
    """Exact optimum of corpus BLEU along one weight coordinate.

    Returns (gamma, bleu) for the best interval midpoint, or (None, cur)
    when the coordinate admits no improvement over its current value.
    """
    stats = [
        [bleu_stats(tokens, ref) for tokens, _ in pool]
        for pool, ref in zip(pools, refs)
    ]
    envelopes = []
    for pool in pools:
        lines = []
        for i, (_, feats) in enumerate(pool):
            a = sum(w * f for d, (w, f) in enumerate(zip(wvec, feats)) if d != dim)
            lines.append((a, feats[dim], i))
        envelopes.append(upper_envelope(lines))

    events: list[tuple[float, int, int]] = []  # x, sentence, candidate
    current = BleuStats()
    active = [env[0][1] for env in envelopes]
    for s, env in enumerate(envelopes):
        current = current + stats[s][env[0][1]]
        for x_from, idx in env[1:]:
            events.append((x_from, s, idx))
    events.sort(key=lambda e: e[0])

    cur_bleu = _pool_bleu_at(pools, refs, wvec)
    best_bleu, best_gamma = float("-inf"), None
    boundaries = [e[0] for e in events]
    k = 0
    interval_start = float("-inf")
    while True:
        interval_end = boundaries[k] if k < len(events) else float("inf")
        if interval_start == float("-inf"):
            mid = interval_end - 1.0 if interval_end != float("inf") else wvec[dim]
        elif interval_end == float("inf"):
            mid = interval_start + 1.0
        else:
            mid = (interval_start + interval_end) / 2.0
        b = bleu_from_stats(current)
        if b > best_bleu + 1e-12:
            best_bleu, best_gamma = b, mid
        if k >= len(events):
            break
        # apply all events at this boundary
        x = boundaries[k]
        while k < len(events) and boundaries[k] == x:
            _, s, idx = events[k]
            current = BleuStats(
                [a - b2 for a, b2 in zip(current.matches, stats[s][active[s]].matches)],
                [a - b2 for a, b2 in zip(current.totals, stats[s][active[s]].totals)],
                current.hyp_len - stats[s][active[s]].hyp_len,
                current.ref_len - stats[s][active[s]].ref_len,
            ) + stats[s][idx]
            active[s] = idx
            k += 1
        interval_start = x
    if best_gamma is None or best_bleu <= cur_bleu + 1e-9:
        return None, cur_bleu
    return best_gamma, best_bleu


def tune_weights(
    pt: PhraseTable,
    lm: NGramLanguageModel,
    dev: ParallelCorpus,
    init: LogLinearWeights,
    rounds: int,
    beam: int = 16,
    distortion_limit: int = 0,
    nbest: int = 20,
    seed: int = 0,
) -> LogLinearWeights:
    """Iterative n-best line-search tuning maximizing dev corpus BLEU.

    The returned weights never score below the initial ones on the dev
    set: every round's weights are re-scored by decoding and the best
    seen (including the initial) wins.
    """
    if len(dev) == 0:
        raise ValueError("empty dev corpus")
    if rounds <= 0:
        return init

    rng = random.Random(seed)
    refs = dev.targets()
    sources = dev.sources()

    def dev_bleu(w: LogLinearWeights) -> float:
        total = BleuStats()
        for x, ref in zip(sources, refs):
            hyp, _ = decode(pt, lm, w, x, beam=beam, distortion_limit=distortion_limit)
            total = total + bleu_stats(hyp.tokens, ref)
        return bleu_from_stats(total)

    pools: list[dict[tuple[str, ...], tuple[float, ...]]] = [dict() for _ in sources]
    best_w, best_b = init, dev_bleu(init)
    current = init
    for _ in range(rounds):
        for s, x in enumerate(sources):
            _, graph = decode(pt, lm, current, x, beam=beam, distortion_limit=distortion_limit)
            for tokens, _, feats in graph.k_best(nbest):
                pools[s][tokens] = feats
        pool_lists = [sorted(p.items()) for p in pools]
        wvec = list(current.as_vector())
        dims = list(range(len(FEATURE_NAMES)))
        rng.shuffle(dims)
        for dim in dims:
            gamma, _ = line_search(pool_lists, refs, wvec, dim)
            if gamma is not None:
                wvec[dim] = gamma
        current = LogLinearWeights.from_vector(wvec)
        b = dev_bleu(current)
        if b > best_b + 1e-12:
            best_w, best_b = current, b
    return best_w
