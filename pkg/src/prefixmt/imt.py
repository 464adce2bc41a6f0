"""Prefix-based interactive translation: sessions and user simulation.

The protocol: the system proposes a hypothesis; the user corrects the
leftmost wrong word, which validates everything before it plus the
correction; the system regenerates the suffix; repeat until the user
accepts.  Any object with a ``suffix(source, prefix)`` method can drive
a session, so the statistical and neural engines plug in identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, Sequence

from .text import Sentence, detokenize

# sentinel correction used by the simulator to cut an over-long hypothesis
END_MARKER = "<end>"


class SuffixGenerator(Protocol):
    def suffix(self, source: Sentence, prefix: Sentence) -> Sentence: ...


class SessionError(Exception):
    """Invalid operation on a session (bad position, already accepted)."""


@dataclass(frozen=True)
class IterationRecord:
    position: int
    word: str
    hypothesis: Sentence


@dataclass(frozen=True)
class SessionMetrics:
    word_strokes: int
    mouse_actions: int
    iterations: int
    final_hypothesis: Sentence


@dataclass
class ImtSession:
    id: int
    source: Sentence
    generator: SuffixGenerator
    hypothesis: Sentence = ()
    prefix_len: int = 0
    word_strokes: int = 0
    mouse_actions: int = 0
    status: str = "active"
    iterations: list[IterationRecord] = field(default_factory=list)

    def prefix(self) -> Sentence:
        return self.hypothesis[: self.prefix_len]

    def metrics(self) -> SessionMetrics:
        return SessionMetrics(
            self.word_strokes, self.mouse_actions, len(self.iterations), self.hypothesis
        )

    def trace_lines(self) -> list[str]:
        return [
            f"IT-{k}\t{rec.position}\t{rec.word}\t{detokenize(rec.hypothesis)}"
            for k, rec in enumerate(self.iterations, start=1)
        ]


def start_session(g: SuffixGenerator, x: Sentence, session_id: int = 0) -> ImtSession:
    """Open a session with the system's initial hypothesis (empty prefix)."""
    session = ImtSession(session_id, tuple(x), g)
    session.hypothesis = tuple(g.suffix(session.source, ()))
    return session


def apply_correction(s: ImtSession, position: int, word: str) -> ImtSession:
    """Replace the word at a 1-based position, validating the new prefix.

    The position must lie beyond the already-validated prefix and at most
    one past the end of the hypothesis (an append).  Costs one word stroke
    and one mouse action.
    """
    if s.status != "active":
        raise SessionError("session already accepted")
    if not word or any(ch.isspace() for ch in word):
        raise SessionError(f"correction must be a single non-empty word: {word!r}")
    if position < 1 or position > len(s.hypothesis) + 1:
        raise SessionError(
            f"position {position} out of range 1..{len(s.hypothesis) + 1}"
        )
    if position <= s.prefix_len:
        raise SessionError(f"position {position} lies in the validated prefix")
    prefix = s.hypothesis[: position - 1] + (word,)
    suffix = tuple(s.generator.suffix(s.source, prefix))
    s.hypothesis = prefix + suffix
    s.prefix_len = position
    s.word_strokes += 1
    s.mouse_actions += 1
    s.iterations.append(IterationRecord(position, word, s.hypothesis))
    return s


def truncate_at(s: ImtSession, position: int) -> ImtSession:
    """Cut the hypothesis so it ends right before a 1-based position.

    Used when the hypothesis overruns the wanted translation: everything
    before the position is validated, the rest discarded.  Costs one
    mouse action and no word strokes.
    """
    if s.status != "active":
        raise SessionError("session already accepted")
    if position < 1 or position > len(s.hypothesis):
        raise SessionError(f"position {position} out of range 1..{len(s.hypothesis)}")
    if position <= s.prefix_len:
        raise SessionError(f"position {position} lies in the validated prefix")
    s.hypothesis = s.hypothesis[: position - 1]
    s.prefix_len = len(s.hypothesis)
    s.mouse_actions += 1
    s.iterations.append(IterationRecord(position, END_MARKER, s.hypothesis))
    return s


def accept(s: ImtSession) -> SessionMetrics:
    """Close the session; the acceptance click costs one mouse action."""
    if s.status != "active":
        raise SessionError("session already accepted")
    s.mouse_actions += 1
    s.status = "accepted"
    return s.metrics()


def leftmost_divergence(hyp: Sentence, ref: Sentence) -> tuple[int, str] | None:
    """First 1-based position where the hypothesis diverges from the reference.

    Returns (position, wanted word); the END marker signals that the
    hypothesis must be truncated.  None when they already match.
    """
    for i, (h, r) in enumerate(zip(hyp, ref), start=1):
        if h != r:
            return i, r
    if len(hyp) < len(ref):
        return len(hyp) + 1, ref[len(hyp)]
    if len(hyp) > len(ref):
        return len(ref) + 1, END_MARKER
    return None


def simulate_session(
    g: SuffixGenerator,
    x: Sentence,
    ref: Sentence,
    trace: list[str] | None = None,
) -> SessionMetrics:
    """Replay a session with a simulated user whose target is ``ref``.

    The user always corrects the leftmost wrong word (one stroke, one
    action), truncates an over-long hypothesis (one action), and accepts
    once hypothesis and reference match.  Prefix monotonicity bounds the
    loop at len(ref)+1 iterations.
    """
    if not ref:
        raise ValueError("empty reference")
    session = start_session(g, x)
    while True:
        divergence = leftmost_divergence(session.hypothesis, ref)
        if divergence is None:
            break
        position, word = divergence
        if word == END_MARKER:
            truncate_at(session, position)
        else:
            apply_correction(session, position, word)
    metrics = accept(session)
    if trace is not None:
        trace.extend(session.trace_lines())
    return metrics


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

class SmtTranslator:
    """Suffix generator over a phrase table, LM and weights.

    Decoding a source yields a word graph; suffixes come from
    error-correcting prefix search on that graph, which is cached so a
    session's corrections do not re-decode.
    """

    def __init__(self, phrase_table, lm, weights, beam: int = 16,
                 distortion_limit: int = 0, cache_size: int = 64):
        from .smt.decoder import decode  # deferred; keeps import light

        self._decode = decode
        self.phrase_table = phrase_table
        self.lm = lm
        self.weights = weights
        self.beam = beam
        self.distortion_limit = distortion_limit
        self._cache: dict[Sentence, object] = {}
        self._cache_size = cache_size

    def graph(self, source: Sentence):
        source = tuple(source)
        if source not in self._cache:
            if len(self._cache) >= self._cache_size:
                self._cache.pop(next(iter(self._cache)))
            _, graph = self._decode(
                self.phrase_table, self.lm, self.weights, source,
                beam=self.beam, distortion_limit=self.distortion_limit,
            )
            self._cache[source] = graph
        return self._cache[source]

    def translate(self, source: Sentence):
        hyp, _ = self._decode(
            self.phrase_table, self.lm, self.weights, tuple(source),
            beam=self.beam, distortion_limit=self.distortion_limit,
        )
        return hyp

    def suffix(self, source: Sentence, prefix: Sentence) -> Sentence:
        return self.graph(source).suffix_search(tuple(prefix)).suffix


class NeuralTranslator:
    """Suffix generator over a trained neural model (with its BPE)."""

    def __init__(self, model, beam_config=None):
        from .neural.search import BeamConfig, beam_decode, prefix_decode

        self.model = model
        self.config = beam_config or BeamConfig()
        self._beam_decode = beam_decode
        self._prefix_decode = prefix_decode

    def translate(self, source: Sentence):
        return self._beam_decode(self.model, tuple(source), self.config)

    def suffix(self, source: Sentence, prefix: Sentence) -> Sentence:
        return self._prefix_decode(self.model, tuple(source), tuple(prefix), self.config)


class CopyGenerator:
    """Baseline: propose the source itself and never adapt.

    After k validated words the suffix is simply the source from position
    k on, which makes simulated sessions equivalent to post-editing the
    raw source word by word.
    """

    def suffix(self, source: Sentence, prefix: Sentence) -> Sentence:
        return tuple(source[len(prefix):])


class ScriptedGenerator:
    """Replays a fixed mapping from prefixes to suffixes (for tests/demos)."""

    def __init__(self, script: dict[Sentence, Sentence]):
        self.script = {tuple(k): tuple(v) for k, v in script.items()}

    def suffix(self, source: Sentence, prefix: Sentence) -> Sentence:
        prefix = tuple(prefix)
        if prefix in self.script:
            return self.script[prefix]
        raise KeyError(f"no scripted suffix for prefix {prefix!r}")
