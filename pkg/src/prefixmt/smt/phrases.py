"""Phrase pair extraction from aligned sentence pairs."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from ..corpus import ParallelCorpus
from ..text import Sentence

Phrase = tuple[str, ...]


@dataclass(frozen=True)
class PhraseTable:
    """source phrase -> [(target phrase, p(t|s), p(s|t))], best first."""

    entries: dict[Phrase, tuple[tuple[Phrase, float, float], ...]]
    max_phrase_len: int

    def options(self, src_phrase: Phrase) -> tuple[tuple[Phrase, float, float], ...]:
        return self.entries.get(tuple(src_phrase), ())

    def __contains__(self, src_phrase: Phrase) -> bool:
        return tuple(src_phrase) in self.entries

    def save(self, path: str | Path) -> None:
        lines = []
        for src in sorted(self.entries):
            for tgt, p_ts, p_st in self.entries[src]:
                lines.append(f"{' '.join(src)} ||| {' '.join(tgt)} ||| {p_ts!r} {p_st!r}")
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "PhraseTable":
        grouped: dict[Phrase, list[tuple[Phrase, float, float]]] = {}
        max_len = 1
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            src_text, tgt_text, probs = line.split(" ||| ")
            src = tuple(src_text.split())
            tgt = tuple(tgt_text.split())
            p_ts, p_st = (float(x) for x in probs.split())
            grouped.setdefault(src, []).append((tgt, p_ts, p_st))
            max_len = max(max_len, len(src), len(tgt))
        return cls(_sorted_entries(grouped), max_len)


def _sorted_entries(
    grouped: dict[Phrase, list[tuple[Phrase, float, float]]]
) -> dict[Phrase, tuple[tuple[Phrase, float, float], ...]]:
    return {
        src: tuple(sorted(opts, key=lambda o: (-o[1], o[0])))
        for src, opts in grouped.items()
    }


def extract_pair_phrases(
    src: Sentence,
    tgt: Sentence,
    links: set[tuple[int, int]],
    max_len: int,
) -> list[tuple[Phrase, Phrase]]:
    """All phrase pairs consistent with the alignment (1-based links).

    A source span is paired with the span of its linked target words when
    no link crosses the box; unaligned target edge words extend the box.
    """
    out = []
    aligned_tgt = {j for _, j in links}
    for i1 in range(1, len(src) + 1):
        for i2 in range(i1, min(i1 + max_len - 1, len(src)) + 1):
            linked = [(i, j) for i, j in links if i1 <= i <= i2]
            if not linked:
                continue
            j1 = min(j for _, j in linked)
            j2 = max(j for _, j in linked)
            # consistency: no target word in the box links outside [i1, i2]
            if any(j1 <= j <= j2 and not (i1 <= i <= i2) for i, j in links):
                continue
            lo = j1
            while True:
                hi = j2
                while True:
                    if hi - lo + 1 <= max_len:
                        out.append((src[i1 - 1 : i2], tgt[lo - 1 : hi]))
                    hi += 1
                    if hi > len(tgt) or hi in aligned_tgt:
                        break
                lo -= 1
                if lo < 1 or lo in aligned_tgt:
                    break
    return out


def extract_phrases(
    c: ParallelCorpus,
    alignments: Sequence[set[tuple[int, int]]],
    max_len: int = 4,
) -> PhraseTable:
    """Relative-frequency phrase table in both directions."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    if len(alignments) != len(c):
        raise ValueError("one alignment per pair required")
    joint: dict[tuple[Phrase, Phrase], int] = {}
    src_totals: dict[Phrase, int] = {}
    tgt_totals: dict[Phrase, int] = {}
    for (src, tgt), links in zip(c, alignments):
        for s_phr, t_phr in extract_pair_phrases(src, tgt, links, max_len):
            joint[(s_phr, t_phr)] = joint.get((s_phr, t_phr), 0) + 1
            src_totals[s_phr] = src_totals.get(s_phr, 0) + 1
            tgt_totals[t_phr] = tgt_totals.get(t_phr, 0) + 1
    grouped: dict[Phrase, list[tuple[Phrase, float, float]]] = {}
    for (s_phr, t_phr), n in joint.items():
        grouped.setdefault(s_phr, []).append(
            (t_phr, n / src_totals[s_phr], n / tgt_totals[t_phr])
        )
    return PhraseTable(_sorted_entries(grouped), max_len)
