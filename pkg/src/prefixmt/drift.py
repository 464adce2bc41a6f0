"""Synthetic historical-drift corpora.

Real digitized historical/modern parallel texts are rarely redistributable,
so experiments here run on modern text perturbed by deterministic spelling
and lexicon rewrite rules (v/u swaps, inserted h, archaic function words).
The perturbed text plays the historical source; the original is the target.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import ParallelCorpus, make_corpus
from .text import Sentence


@dataclass(frozen=True)
class DriftRule:
    """Substring rewrite applied per token, optionally with probability."""

    pattern: str
    replacement: str
    prob: float = 1.0


def load_rules(path: str | Path) -> list[DriftRule]:
    """Read one rule per line: pattern<TAB>replacement."""
    rules = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        pattern, replacement = line.split("\t")
        rules.append(DriftRule(pattern, replacement))
    return rules


def save_rules(rules: Iterable[DriftRule], path: str | Path) -> None:
    Path(path).write_text(
        "".join(f"{r.pattern}\t{r.replacement}\n" for r in rules), encoding="utf-8"
    )


def synth_drift(
    sentences: Sequence[Sentence], rules: Sequence[DriftRule], seed: int, name: str = "drift"
) -> ParallelCorpus:
    """Perturb modern sentences into a pseudo-historical parallel corpus.

    Deterministic given the seed; an empty rule set leaves source == target.
    Rules apply in order, each to every token (whole-token occurrences of
    the pattern included).  A token emptied by rewriting keeps its original
    form so no corpus side ever empties.
    """
    rng = random.Random(seed)
    pairs = []
    for sent in sentences:
        perturbed = []
        for tok in sent:
            new = tok
            for rule in rules:
                if rule.pattern not in new:
                    continue
                if rule.prob >= 1.0 or rng.random() < rule.prob:
                    new = new.replace(rule.pattern, rule.replacement)
            perturbed.append(new if new else tok)
        pairs.append((tuple(perturbed), tuple(sent)))
    return make_corpus(pairs, name=name)


# Default rule set used by the demos and the synthetic experiments: a
# Spanish-flavored drift in the spirit of 17th-century orthography.
DEFAULT_RULES = (
    DriftRule("ahora", "aora"),
    DriftRule("dijo", "dixo"),
    DriftRule("será", "sera"),
    DriftRule("después", "despues"),
    DriftRule("v", "u"),
    DriftRule("j", "x"),
    DriftRule("h", ""),
)


_ONSETS = ["b", "c", "d", "f", "g", "l", "m", "n", "p", "r", "s", "t", "v", "j", "h", ""]
_NUCLEI = ["a", "e", "i", "o", "u", "ia", "ue"]
_CODAS = ["", "", "n", "s", "r", "l"]


def synth_vocabulary(size: int, seed: int) -> list[str]:
    """Deterministic pseudo-word vocabulary of the requested size."""
    rng = random.Random(seed)
    words: list[str] = []
    seen = set()
    while len(words) < size:
        n_syll = rng.choice([1, 2, 2, 3])
        word = "".join(
            rng.choice(_ONSETS) + rng.choice(_NUCLEI) + rng.choice(_CODAS)
            for _ in range(n_syll)
        )
        if word and word not in seen:
            seen.add(word)
            words.append(word)
    return words


def synth_sentences(
    n: int, seed: int, vocab_size: int = 60, min_len: int = 4, max_len: int = 12
) -> list[Sentence]:
    """Sample sentences from a seeded bigram chain over a pseudo-vocabulary.

    The chain gives the language model something to learn; a zipfy unigram
    start keeps token frequencies realistic.
    """
    rng = random.Random(seed)
    vocab = synth_vocabulary(vocab_size, seed)
    # fixed bigram preferences: each word strongly prefers a few successors
    successors = {
        w: rng.sample(vocab, k=min(6, vocab_size)) for w in vocab
    }
    weights = [1.0 / (i + 1) for i in range(vocab_size)]
    out = []
    for _ in range(n):
        length = rng.randint(min_len, max_len)
        sent = [rng.choices(vocab, weights=weights)[0]]
        for _ in range(length - 1):
            if rng.random() < 0.8:
                sent.append(rng.choice(successors[sent[-1]]))
            else:
                sent.append(rng.choices(vocab, weights=weights)[0])
        sent.append(rng.choice([".", ".", "!", "?"]))
        out.append(tuple(sent))
    return out
