"""Tokenization primitives shared by every engine.

Sentences are tuples of non-empty, whitespace-free tokens.  The tokenizer
splits on whitespace and then detaches a fixed set of punctuation marks
from word edges; the detokenizer re-attaches them, so the two functions
are inverses on canonical token sequences.
"""

from __future__ import annotations

import re
from typing import Iterable

Sentence = tuple[str, ...]

# Punctuation detached from word edges.  Closing marks lose the preceding
# space on detokenization; opening marks lose the following one.
EDGE_PUNCT = set(".,;:!?¡¿\"'—")
CLOSING_PUNCT = ".,;:!?"
OPENING_PUNCT = "¡¿"

_SPACE_BEFORE_CLOSING = re.compile(r" (?=[.,;:!?])")
_SPACE_AFTER_OPENING = re.compile(r"(?<=[¡¿]) ")


def sentence(tokens: Iterable[str]) -> Sentence:
    """Build a Sentence, validating the token invariants."""
    toks = tuple(tokens)
    for t in toks:
        if not t:
            raise ValueError("empty token")
        if any(c.isspace() for c in t):
            raise ValueError(f"token contains whitespace: {t!r}")
    return toks


def tokenize(text: str) -> Sentence:
    """Split text on whitespace, detaching edge punctuation as tokens."""
    out: list[str] = []
    for chunk in text.split():
        head: list[str] = []
        tail: list[str] = []
        while len(chunk) > 1 and chunk[0] in EDGE_PUNCT:
            head.append(chunk[0])
            chunk = chunk[1:]
        while len(chunk) > 1 and chunk[-1] in EDGE_PUNCT:
            tail.append(chunk[-1])
            chunk = chunk[:-1]
        out.extend(head)
        out.append(chunk)
        out.extend(reversed(tail))
    return tuple(out)


def detokenize(s: Sentence) -> str:
    """Join tokens with spaces, closing up around attached punctuation."""
    text = " ".join(s)
    text = _SPACE_BEFORE_CLOSING.sub("", text)
    text = _SPACE_AFTER_OPENING.sub("", text)
    return text
