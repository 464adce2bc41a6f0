"""Byte pair encoding over word-internal character symbols.

Merges are learned greedily on token-frequency tables (joint over both
corpus sides by default).  Encoded output marks word-internal pieces with
a leading continuation marker so that word boundaries are recoverable and
word-initial subwords are distinguishable from continuations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .corpus import ParallelCorpus
from .text import Sentence

CONT_MARKER = "##"

# desk-scale default; the large-corpus reference setting is kept for
# documentation and configuration defaults in full-scale runs
DEFAULT_MERGES = 1000
REFERENCE_MERGES = 32000


@dataclass(frozen=True)
class BpeModel:
    merges: tuple[tuple[str, str], ...]
    marker: str = CONT_MARKER
    # encode cache, keyed by raw word; not part of the model's identity
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def num_merges(self) -> int:
        return len(self.merges)

    def save(self, path: str | Path) -> None:
        lines = [f"bpe v1 {self.num_merges}"]
        lines += [f"{left} {right}" for left, right in self.merges]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "BpeModel":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        if not lines or not lines[0].startswith("bpe v1 "):
            raise ValueError(f"{path}: not a bpe v1 model file")
        declared = int(lines[0].split()[2])
        merges = []
        for line in lines[1:]:
            if not line.strip():
                continue
            left, right = line.split(" ")
            merges.append((left, right))
        if len(merges) != declared:
            raise ValueError(f"{path}: header declares {declared} merges, found {len(merges)}")
        return cls(tuple(merges))


def _word_frequencies(c: ParallelCorpus, side: str) -> dict[str, int]:
    freqs: dict[str, int] = {}
    sides = {"joint": (0, 1), "source": (0,), "target": (1,)}[side]
    for pair in c:
        for i in sides:
            for tok in pair[i]:
                freqs[tok] = freqs.get(tok, 0) + 1
    return freqs


def train_bpe(c: ParallelCorpus, num_merges: int, side: str = "joint") -> BpeModel:
    """Learn merges by greedy most-frequent adjacent pair counting.

    Ties break lexicographically on (left, right); training stops early
    once no pair occurs at least twice.
    """
    if num_merges < 0:
        raise ValueError("num_merges must be >= 0")
    if side not in ("joint", "source", "target"):
        raise ValueError(f"side must be joint/source/target, got {side!r}")
    freqs = _word_frequencies(c, side)
    words: list[tuple[list[str], int]] = [(list(w), n) for w, n in sorted(freqs.items())]
    merges: list[tuple[str, str]] = []
    for _ in range(num_merges):
        counts: dict[tuple[str, str], int] = {}
        for symbols, n in words:
            for a, b in zip(symbols, symbols[1:]):
                counts[(a, b)] = counts.get((a, b), 0) + n
        if not counts:
            break
        best = min(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        if best[1] < 2:
            break
        pair = best[0]
        merges.append(pair)
        for symbols, _ in words:
            _merge_in_place(symbols, pair)
    return BpeModel(tuple(merges))


def _merge_in_place(symbols: list[str], pair: tuple[str, str]) -> None:
    i = 0
    while i < len(symbols) - 1:
        if symbols[i] == pair[0] and symbols[i + 1] == pair[1]:
            symbols[i] = symbols[i] + symbols[i + 1]
            del symbols[i + 1]
        else:
            i += 1


def _encode_word(m: BpeModel, word: str) -> list[str]:
    cached = m._cache.get(word)
    if cached is not None:
        return cached
    ranks = {pair: r for r, pair in enumerate(m.merges)}
    symbols = list(word)
    while len(symbols) > 1:
        best_rank, best_pair = None, None
        for a, b in zip(symbols, symbols[1:]):
            r = ranks.get((a, b))
            if r is not None and (best_rank is None or r < best_rank):
                best_rank, best_pair = r, (a, b)
        if best_pair is None:
            break
        _merge_in_place(symbols, best_pair)
    pieces = [symbols[0]]
    # A raw first piece that happens to begin with the marker would be
    # indistinguishable from a continuation; peel one character off.
    if pieces[0].startswith(m.marker) and len(pieces[0]) > 1:
        pieces = [symbols[0][0], m.marker + symbols[0][1:]]
    pieces += [m.marker + s for s in symbols[1:]]
    m._cache[word] = pieces
    return pieces


def bpe_encode(m: BpeModel, s: Sentence) -> Sentence:
    """Split each word into subword pieces, marking continuations."""
    out: list[str] = []
    for word in s:
        out.extend(_encode_word(m, word))
    return tuple(out)


def bpe_decode(subwords: Sentence, marker: str = CONT_MARKER) -> Sentence:
    """Glue continuation-marked pieces back into whole words.

    A continuation marker at sequence start attaches to nothing and is
    emitted as a word of its own.
    """
    words: list[str] = []
    for piece in subwords:
        if piece.startswith(marker) and len(piece) > len(marker) and words:
            words[-1] += piece[len(marker):]
        elif piece.startswith(marker) and len(piece) > len(marker):
            words.append(piece[len(marker):])
        else:
            words.append(piece)
    return tuple(words)


def is_continuation(piece: str, marker: str = CONT_MARKER) -> bool:
    return piece.startswith(marker) and len(piece) > len(marker)
