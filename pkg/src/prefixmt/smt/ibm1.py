"""IBM Model 1 word alignment via EM, with grow-diag symmetrization."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from ..corpus import ParallelCorpus
from ..text import Sentence


@dataclass(frozen=True)
class LexicalTable:
    """p(target | source) estimates; per-source rows sum to one."""

    p_t_given_s: dict[tuple[str, str], float]
    log_likelihoods: tuple[float, ...] = ()

    def prob(self, target: str, source: str) -> float:
        return self.p_t_given_s.get((source, target), 0.0)


def _log_likelihood(t: dict[tuple[str, str], float], c: ParallelCorpus) -> float:
    """Model 1 corpus log-likelihood with uniform alignment prior."""
    ll = 0.0
    for src, tgt in c:
        for y in tgt:
            s = sum(t.get((x, y), 0.0) for x in src)
            ll += math.log(max(s, 1e-300)) - math.log(len(src))
    return ll


def train_ibm1(c: ParallelCorpus, iterations: int = 10) -> LexicalTable:
    """EM from uniform initialization; log-likelihood trace is attached.

    Per-source rows are renormalized every iteration, so the EM guarantee
    (non-decreasing corpus log-likelihood) holds exactly.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if len(c) == 0:
        raise ValueError("empty corpus")
    tgt_vocab = {y for _, tgt in c for y in tgt}
    uniform = 1.0 / len(tgt_vocab)
    t: dict[tuple[str, str], float] = {}
    for src, tgt in c:
        for x in src:
            for y in tgt:
                t[(x, y)] = uniform

    trace = [_log_likelihood(t, c)]
    for _ in range(iterations):
        count: dict[tuple[str, str], float] = {}
        total: dict[str, float] = {}
        for src, tgt in c:
            for y in tgt:
                denom = sum(t[(x, y)] for x in src)
                for x in src:
                    frac = t[(x, y)] / denom
                    count[(x, y)] = count.get((x, y), 0.0) + frac
                    total[x] = total.get(x, 0.0) + frac
        t = {(x, y): v / total[x] for (x, y), v in count.items()}
        trace.append(_log_likelihood(t, c))
    return LexicalTable(t, tuple(trace))


def _viterbi_links(lex: LexicalTable, src: Sentence, tgt: Sentence) -> set[tuple[int, int]]:
    """1-based (source, target) links: each target picks its best source."""
    links = set()
    for j, y in enumerate(tgt, start=1):
        best_i, best_p = 1, -1.0
        for i, x in enumerate(src, start=1):
            p = lex.prob(y, x)
            if p > best_p:
                best_i, best_p = i, p
        links.add((best_i, j))
    return links


def align_pair(
    lex_st: LexicalTable, lex_ts: LexicalTable, pair: tuple[Sentence, Sentence]
) -> set[tuple[int, int]]:
    """Symmetrize the two directional Viterbi alignments, grow-diag style.

    Starts from the intersection and repeatedly adds union links adjacent
    (including diagonally) to an existing link when either of their end
    positions is still unaligned; scan order is fixed for determinism.
    """
    src, tgt = pair
    forward = _viterbi_links(lex_st, src, tgt)
    backward = {
        (i, j)
        for j, i in _viterbi_links(lex_ts, tgt, src)  # roles swapped
    }
    alignment = forward & backward
    union = forward | backward
    neighbors = [(-1, 0), (0, -1), (1, 0), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1)]
    grown = True
    while grown:
        grown = False
        aligned_src = {i for i, _ in alignment}
        aligned_tgt = {j for _, j in alignment}
        for i, j in sorted(alignment):
            for di, dj in neighbors:
                cand = (i + di, j + dj)
                if cand not in union or cand in alignment:
                    continue
                if cand[0] not in aligned_src or cand[1] not in aligned_tgt:
                    alignment.add(cand)
                    aligned_src.add(cand[0])
                    aligned_tgt.add(cand[1])
                    grown = True
    return alignment


def align_corpus(
    lex_st: LexicalTable, lex_ts: LexicalTable, c: ParallelCorpus
) -> list[set[tuple[int, int]]]:
    return [align_pair(lex_st, lex_ts, pair) for pair in c]
