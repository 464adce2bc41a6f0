"""Parallel corpus loading, statistics and vocabulary plumbing."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .text import Sentence, tokenize

logger = logging.getLogger(__name__)

PAD, UNK, BOS, EOS = "<pad>", "<unk>", "<s>", "</s>"
RESERVED = (PAD, UNK, BOS, EOS)
PAD_ID, UNK_ID, BOS_ID, EOS_ID = 0, 1, 2, 3


@dataclass(frozen=True)
class ParallelCorpus:
    """Line-aligned source/target sentence pairs."""

    pairs: tuple[tuple[Sentence, Sentence], ...]
    name: str = ""
    dropped: int = 0

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[Sentence, Sentence]]:
        return iter(self.pairs)

    def sources(self) -> list[Sentence]:
        return [src for src, _ in self.pairs]

    def targets(self) -> list[Sentence]:
        return [tgt for _, tgt in self.pairs]


def make_corpus(pairs: Iterable[tuple[Sentence, Sentence]], name: str = "") -> ParallelCorpus:
    """Build a corpus, dropping pairs where either side is empty."""
    kept = []
    dropped = 0
    for src, tgt in pairs:
        if src and tgt:
            kept.append((tuple(src), tuple(tgt)))
        else:
            dropped += 1
    return ParallelCorpus(tuple(kept), name=name, dropped=dropped)


def load_parallel(source_path: str | Path, target_path: str | Path, name: str = "") -> ParallelCorpus:
    """Load two line-aligned UTF-8 files into a tokenized parallel corpus.

    Pairs with an empty side are dropped (counted in ``corpus.dropped``);
    mismatched line counts and undecodable bytes are hard errors.
    """
    src_lines = _read_lines(source_path)
    tgt_lines = _read_lines(target_path)
    if len(src_lines) != len(tgt_lines):
        raise ValueError(
            f"line count mismatch {len(src_lines)} vs {len(tgt_lines)} "
            f"({source_path} / {target_path})"
        )
    corpus = make_corpus(
        ((tokenize(s), tokenize(t)) for s, t in zip(src_lines, tgt_lines)),
        name=name or Path(source_path).stem,
    )
    if corpus.dropped:
        logger.warning("%s: dropped %d empty-sided pairs", corpus.name, corpus.dropped)
    return corpus


def _read_lines(path: str | Path) -> list[str]:
    data = Path(path).read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        line = data[: exc.start].count(b"\n") + 1
        raise ValueError(f"{path}: undecodable bytes at line {line}") from None
    return text.splitlines()


@dataclass(frozen=True)
class CorpusStats:
    sentences: int
    source_tokens: int
    target_tokens: int
    source_vocab: int
    target_vocab: int


def corpus_stats(c: ParallelCorpus) -> CorpusStats:
    """Exact |S|, |T| and |V| counts for both sides."""
    src_tokens = sum(len(s) for s, _ in c)
    tgt_tokens = sum(len(t) for _, t in c)
    src_vocab = {tok for s, _ in c for tok in s}
    tgt_vocab = {tok for _, t in c for tok in t}
    return CorpusStats(len(c), src_tokens, tgt_tokens, len(src_vocab), len(tgt_vocab))


def _fmt_count(n: int) -> str:
    if n >= 1_000_000:
        return f"{n / 1_000_000:.1f}M"
    if n >= 10_000:
        return f"{n / 1_000:.1f}K"
    return str(n)


def _fmt_pair(a: int, b: int) -> str:
    fa, fb = _fmt_count(a), _fmt_count(b)
    if fa and fb and fa[-1] == fb[-1] and fa[-1] in "KM":
        fa = fa[:-1]  # shared magnitude suffix is written once
    return f"{fa}/{fb}"


def format_stats(stats: CorpusStats) -> str:
    """Render counts in the conventional corpora-statistics layout."""
    return (
        f"|S| {_fmt_count(stats.sentences)}, "
        f"|T| {_fmt_pair(stats.source_tokens, stats.target_tokens)}, "
        f"|V| {_fmt_pair(stats.source_vocab, stats.target_vocab)}"
    )


class Vocabulary:
    """Token/id bijection with fixed reserved ids for PAD/UNK/BOS/EOS."""

    def __init__(self, tokens: Iterable[str] = ()):
        self._token_of: list[str] = list(RESERVED)
        self._id_of: dict[str, int] = {t: i for i, t in enumerate(RESERVED)}
        for t in tokens:
            self.add(t)

    def add(self, token: str) -> int:
        if token in self._id_of:
            return self._id_of[token]
        idx = len(self._token_of)
        self._id_of[token] = idx
        self._token_of.append(token)
        return idx

    def id_of(self, token: str) -> int:
        return self._id_of.get(token, UNK_ID)

    def token_of(self, idx: int) -> str:
        return self._token_of[idx]

    def encode(self, s: Sentence) -> list[int]:
        return [self.id_of(t) for t in s]

    def decode(self, ids: Iterable[int]) -> Sentence:
        return tuple(self._token_of[i] for i in ids)

    def __contains__(self, token: str) -> bool:
        return token in self._id_of

    def __len__(self) -> int:
        return len(self._token_of)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Vocabulary) and self._token_of == other._token_of

    def tokens(self) -> list[str]:
        """All tokens in id order, reserved entries first."""
        return list(self._token_of)

    def save(self, path: str | Path) -> None:
        Path(path).write_text("\n".join(self._token_of[len(RESERVED):]) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        return cls(t for t in lines if t)
