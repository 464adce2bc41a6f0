"""Log-linear phrase-based beam decoder emitting word graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from ..corpus import BOS, EOS
from ..text import Sentence
from .lm import NGramLanguageModel
from .phrases import Phrase, PhraseTable
from .wordgraph import Edge, WordGraph

FEATURE_NAMES = ("tm_fwd", "tm_bwd", "lm", "word_penalty", "phrase_penalty", "distortion")

OOV_LOG10 = -7.0


@dataclass(frozen=True)
class LogLinearWeights:
    tm_fwd: float = 1.0
    tm_bwd: float = 1.0
    lm: float = 1.0
    word_penalty: float = 0.0
    phrase_penalty: float = 0.0
    distortion: float = -1.0

    def as_vector(self) -> tuple[float, ...]:
        return tuple(getattr(self, name) for name in FEATURE_NAMES)

    @classmethod
    def from_vector(cls, vec: Sequence[float]) -> "LogLinearWeights":
        return cls(**dict(zip(FEATURE_NAMES, vec)))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            "".join(f"{n}\t{v!r}\n" for n, v in zip(FEATURE_NAMES, self.as_vector())),
            encoding="utf-8",
        )

    @classmethod
    def load(cls, path: str | Path) -> "LogLinearWeights":
        values = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if line.strip():
                name, value = line.split("\t")
                values[name] = float(value)
        return cls(**values)


@dataclass(frozen=True)
class Hypothesis:
    tokens: Sentence
    score: float


def _span_options(
    x: Sentence, pt: PhraseTable
) -> dict[tuple[int, int], list[tuple[Phrase, float, float]]]:
    """Translation options per source span, log10 probabilities.

    Words without any single-word entry get an identity passthrough at
    floor probability so decoding never dead-ends on OOV input.
    """
    options: dict[tuple[int, int], list[tuple[Phrase, float, float]]] = {}
    for i in range(len(x)):
        for j in range(i + 1, min(i + pt.max_phrase_len, len(x)) + 1):
            opts = [
                (tgt, math.log10(p_ts), math.log10(p_st))
                for tgt, p_ts, p_st in pt.options(x[i:j])
            ]
            if opts:
                options[(i, j)] = opts
    for i in range(len(x)):
        if (i, i + 1) not in options:
            options[(i, i + 1)] = [((x[i],), OOV_LOG10, OOV_LOG10)]
    return options


def _future_costs(
    x: Sentence,
    options: dict[tuple[int, int], list[tuple[Phrase, float, float]]],
    lm: NGramLanguageModel,
    w: LogLinearWeights,
) -> dict[tuple[int, int], float]:
    """Optimistic span completion estimate (context-free LM, no distortion)."""
    n = len(x)
    fc: dict[tuple[int, int], float] = {}
    for length in range(1, n + 1):
        for i in range(0, n - length + 1):
            j = i + length
            best = float("-inf")
            for tgt, lp_ts, lp_st in options.get((i, j), ()):
                lm_est = sum(lm.logprob(tok, ()) for tok in tgt)
                best = max(
                    best,
                    w.tm_fwd * lp_ts
                    + w.tm_bwd * lp_st
                    + w.lm * lm_est
                    + w.word_penalty * len(tgt)
                    + w.phrase_penalty,
                )
            for k in range(i + 1, j):
                if fc[(i, k)] + fc[(k, j)] > best:
                    best = fc[(i, k)] + fc[(k, j)]
            fc[(i, j)] = best
    return fc


def decode(
    pt: PhraseTable,
    lm: NGramLanguageModel,
    w: LogLinearWeights,
    x: Sentence,
    beam: int = 16,
    distortion_limit: int = 0,
) -> tuple[Hypothesis, WordGraph]:
    """Coverage-stack beam search; returns the 1-best and the word graph.

    The 1-best is read off the graph by Viterbi, so its score equals the
    maximum path score by construction.
    """
    if beam < 1:
        raise ValueError("beam must be >= 1")
    x = tuple(x)
    n = len(x)
    ctx_init = (BOS,) * max(lm.order - 1, 0)

    if n == 0:
        feats = (0.0, 0.0, lm.logprob(EOS, ctx_init), 0.0, 0.0, 0.0)
        wvec = w.as_vector()
        score = sum(a * b for a, b in zip(wvec, feats))
        graph = WordGraph(2, [Edge(0, 1, (), feats, score)], 0, [1])
        return Hypothesis((), score), graph

    options = _span_options(x, pt)
    fc = _future_costs(x, options, lm, w)
    wvec = w.as_vector()

    # node bookkeeping: state -> node id; per-node best forward score
    state_ids: dict[tuple[int, tuple[str, ...], int], int] = {}
    best: list[float] = []
    states: list[tuple[int, tuple[str, ...], int]] = []
    edges: list[Edge] = []

    def node_for(state: tuple[int, tuple[str, ...], int]) -> int:
        if state not in state_ids:
            state_ids[state] = len(states)
            states.append(state)
            best.append(float("-inf"))
        return state_ids[state]

    def coverage_future(coverage: int) -> float:
        total = 0.0
        i = 0
        while i < n:
            if coverage >> i & 1:
                i += 1
                continue
            j = i
            while j < n and not (coverage >> j & 1):
                j += 1
            total += fc[(i, j)]
            i = j
        return total

    start_state = (0, ctx_init, 0)
    start = node_for(start_state)
    best[start] = 0.0
    end_node = node_for((-1, (), -1))  # dedicated final
    eos_linked: set[int] = set()

    stacks: dict[int, set[int]] = {0: {start}}
    full = (1 << n) - 1
    for count in range(0, n):
        stack = stacks.get(count, set())
        if not stack:
            continue
        ranked = sorted(
            stack, key=lambda nid: (-(best[nid] + coverage_future(states[nid][0])), nid)
        )
        for nid in ranked[:beam]:
            coverage, ctx, last_end = states[nid]
            for (i, j), opts in options.items():
                span_mask = ((1 << (j - i)) - 1) << i
                if coverage & span_mask:
                    continue
                jump = abs(i - last_end)
                if jump > distortion_limit:
                    continue
                for tgt, lp_ts, lp_st in opts:
                    lm_lp = 0.0
                    c = ctx
                    for tok in tgt:
                        lm_lp += lm.logprob(tok, c)
                        c = c + (tok,)
                    new_ctx = c[-(lm.order - 1):] if lm.order > 1 else ()
                    feats = (lp_ts, lp_st, lm_lp, float(len(tgt)), 1.0, float(jump))
                    score = sum(a * b for a, b in zip(wvec, feats))
                    new_cov = coverage | span_mask
                    dst = node_for((new_cov, new_ctx, j))
                    edges.append(Edge(nid, dst, tuple(tgt), feats, score))
                    if best[nid] + score > best[dst]:
                        best[dst] = best[nid] + score
                    new_count = count + (j - i)
                    if new_cov != full:
                        stacks.setdefault(new_count, set()).add(dst)
                    elif dst not in eos_linked:
                        eos_linked.add(dst)
                        eos_feats = (0.0, 0.0, lm.logprob(EOS, new_ctx), 0.0, 0.0, 0.0)
                        eos_score = sum(a * b for a, b in zip(wvec, eos_feats))
                        edges.append(Edge(dst, end_node, (), eos_feats, eos_score))

    labels = [
        "end" if s == (-1, (), -1) else f"{s[0]}|{s[2]}" for s in states
    ]
    graph = WordGraph(len(states), edges, start, [end_node], node_labels=labels)
    tokens, score = graph.viterbi()
    return Hypothesis(tokens, score), graph
