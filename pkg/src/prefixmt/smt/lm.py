"""Interpolated modified Kneser-Ney n-gram language model with ARPA I/O.

Lower orders use continuation counts (raw counts for BOS-initial grams),
three discount levels per order are estimated from count-of-counts, and
interpolation is folded into the stored probabilities so the in-memory
tables follow ARPA backoff semantics exactly.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

from ..corpus import BOS, EOS, UNK
from ..text import Sentence

_LOG10_FLOOR = -99.0


class NGramLanguageModel:
    """Backoff tables: log10 probabilities per gram, log10 backoff per history."""

    def __init__(self, order: int):
        self.order = order
        self.prob: dict[tuple[str, ...], float] = {}
        self.bow: dict[tuple[str, ...], float] = {}
        self.words: list[str] = []  # real words, no specials

    # -- scoring ------------------------------------------------------------

    def logprob(self, word: str, context: Sequence[str] = ()) -> float:
        """log10 P(word | context); OOV words are scored as UNK."""
        w = word if (word,) in self.prob or word in (EOS, UNK) else UNK
        h = tuple(t if (t,) in self.prob or t in (BOS, EOS, UNK) else UNK for t in context)
        h = h[-(self.order - 1):] if self.order > 1 else ()
        acc = 0.0
        while True:
            g = h + (w,)
            if g in self.prob:
                return acc + self.prob[g]
            if not h:
                return acc + self.prob[(UNK,)]
            acc += self.bow.get(h, 0.0)
            h = h[1:]

    def score(self, s: Sentence) -> float:
        """log10 probability of the sentence including the EOS event."""
        context: tuple[str, ...] = (BOS,) * (self.order - 1)
        total = 0.0
        for tok in tuple(s) + (EOS,):
            total += self.logprob(tok, context)
            context = context + (tok,)
        return total

    # -- persistence ----------------------------------------------------------

    def save_arpa(self, path: str | Path) -> None:
        by_order: dict[int, list[tuple[tuple[str, ...], float]]] = {}
        for g, p in self.prob.items():
            by_order.setdefault(len(g), []).append((g, p))
        # backoff contexts with no probability entry of their own (e.g. pure
        # BOS contexts) still need a line to carry their weight
        for h in self.bow:
            if h not in self.prob:
                by_order.setdefault(len(h), []).append((h, _LOG10_FLOOR))
        lines = ["\\data\\"]
        for n in range(1, self.order + 1):
            lines.append(f"ngram {n}={len(by_order.get(n, []))}")
        for n in range(1, self.order + 1):
            lines.append("")
            lines.append(f"\\{n}-grams:")
            for g, p in sorted(by_order.get(n, [])):
                entry = f"{p!r}\t{' '.join(g)}"
                if g in self.bow:
                    entry += f"\t{self.bow[g]!r}"
                lines.append(entry)
        lines += ["", "\\end\\", ""]
        Path(path).write_text("\n".join(lines), encoding="utf-8")

    @classmethod
    def load_arpa(cls, path: str | Path) -> "NGramLanguageModel":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        order = 0
        for line in lines:
            if line.startswith("ngram "):
                order = max(order, int(line.split("=")[0].split()[1]))
            if line.startswith("\\1-grams"):
                break
        model = cls(order)
        current = 0
        for line in lines:
            line = line.strip()
            if line.endswith("-grams:"):
                current = int(line[1:].split("-")[0])
                continue
            if not line or line.startswith("\\") or line.startswith("ngram") or current == 0:
                continue
            parts = line.split("\t")
            gram = tuple(parts[1].split(" "))
            p = float(parts[0])
            if p > _LOG10_FLOOR:
                model.prob[gram] = p
            if len(parts) == 3:
                model.bow[gram] = float(parts[2])
        model.words = sorted(
            g[0] for g in model.prob if len(g) == 1 and g[0] not in (BOS, EOS, UNK)
        )
        return model


def _discounts(counts: dict[tuple[str, ...], int]) -> tuple[float, float, float]:
    """Modified KN discounts D1, D2, D3+ from count-of-counts, clamped."""
    n = [0, 0, 0, 0]
    for c in counts.values():
        if 1 <= c <= 4:
            n[c - 1] += 1
    n1, n2, n3, n4 = n
    y = n1 / (n1 + 2 * n2) if n1 + 2 * n2 > 0 else 0.5
    d1 = 1 - 2 * y * n2 / n1 if n1 > 0 else 0.5
    d2 = 2 - 3 * y * n3 / n2 if n2 > 0 else 1.0
    d3 = 3 - 4 * y * n4 / n3 if n3 > 0 else 1.5
    clamp = lambda d, hi: min(max(d, 0.05), hi)
    return clamp(d1, 1.0), clamp(d2, 2.0), clamp(d3, 3.0)


def train_kn_lm(sentences: Sequence[Sentence], order: int = 5) -> NGramLanguageModel:
    """Estimate an interpolated modified Kneser-Ney model of the given order."""
    if order < 1:
        raise ValueError("order must be >= 1")
    if not sentences:
        raise ValueError("empty corpus")

    # raw counts per order, each padded with its own BOS prefix and EOS
    raw: list[dict[tuple[str, ...], int]] = [dict() for _ in range(order + 1)]
    for sent in sentences:
        for n in range(1, order + 1):
            padded = (BOS,) * (n - 1) + tuple(sent) + (EOS,)
            table = raw[n]
            for i in range(len(padded) - n + 1):
                g = padded[i : i + n]
                table[g] = table.get(g, 0) + 1

    # adjusted counts: continuation counts below the top order, except that
    # BOS-initial grams keep their raw counts (nothing can precede BOS)
    adjusted: list[dict[tuple[str, ...], int]] = [dict() for _ in range(order + 1)]
    adjusted[order] = dict(raw[order])
    for n in range(order - 1, 0, -1):
        continuation: dict[tuple[str, ...], int] = {}
        for g in raw[n + 1]:
            suffix = g[1:]
            continuation[suffix] = continuation.get(suffix, 0) + 1
        table = {}
        for g, c in raw[n].items():
            table[g] = c if g[0] == BOS else continuation.get(g, c)
        adjusted[n] = table

    model = NGramLanguageModel(order)
    model.words = sorted(w for (w,) in adjusted[1] if w not in (BOS, EOS, UNK))
    vocab_size = len(adjusted[1])  # distinct predicted types incl. EOS

    for n in range(1, order + 1):
        table = adjusted[n]
        d1, d2, d3 = _discounts(table)

        def discount(c: int) -> float:
            return d1 if c == 1 else d2 if c == 2 else d3

        histories: dict[tuple[str, ...], list[tuple[str, int]]] = {}
        for g, c in table.items():
            histories.setdefault(g[:-1], []).append((g[-1], c))

        for h, grams in histories.items():
            total = sum(c for _, c in grams)
            gamma = sum(discount(c) for _, c in grams) / total
            for w, c in grams:
                p_low = (
                    1.0 / (vocab_size + 1)
                    if n == 1
                    else 10.0 ** model.logprob(w, h[1:])
                )
                p = (c - discount(c)) / total + gamma * p_low
                model.prob[h + (w,)] = math.log10(p)
            if h:
                model.bow[h] = math.log10(gamma)
            else:
                # the unigram history is empty; its leftover mass feeds UNK
                model.prob[(UNK,)] = math.log10(gamma / (vocab_size + 1))
    return model


def lm_score(lm: NGramLanguageModel, s: Sentence) -> float:
    return lm.score(s)
