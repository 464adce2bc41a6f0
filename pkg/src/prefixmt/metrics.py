"""Quality and effort metrics plus randomization significance testing."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .text import Sentence, detokenize

MAX_BLEU_ORDER = 4
MAX_SHIFT_LEN = 10


# ---------------------------------------------------------------------------
# BLEU
# ---------------------------------------------------------------------------

@dataclass
class BleuStats:
    """Per-sentence clipped n-gram counts; addable for corpus aggregation."""

    matches: list[int] = field(default_factory=lambda: [0] * MAX_BLEU_ORDER)
    totals: list[int] = field(default_factory=lambda: [0] * MAX_BLEU_ORDER)
    hyp_len: int = 0
    ref_len: int = 0

    def __add__(self, other: "BleuStats") -> "BleuStats":
        return BleuStats(
            [a + b for a, b in zip(self.matches, other.matches)],
            [a + b for a, b in zip(self.totals, other.totals)],
            self.hyp_len + other.hyp_len,
            self.ref_len + other.ref_len,
        )


def _ngram_counts(s: Sentence, n: int) -> dict[tuple[str, ...], int]:
    counts: dict[tuple[str, ...], int] = {}
    for i in range(len(s) - n + 1):
        g = tuple(s[i : i + n])
        counts[g] = counts.get(g, 0) + 1
    return counts


def bleu_stats(hyp: Sentence, ref: Sentence) -> BleuStats:
    stats = BleuStats(hyp_len=len(hyp), ref_len=len(ref))
    for n in range(1, MAX_BLEU_ORDER + 1):
        hyp_counts = _ngram_counts(hyp, n)
        ref_counts = _ngram_counts(ref, n)
        stats.totals[n - 1] = max(len(hyp) - n + 1, 0)
        stats.matches[n - 1] = sum(
            min(c, ref_counts.get(g, 0)) for g, c in hyp_counts.items()
        )
    return stats


def bleu_from_stats(stats: BleuStats) -> float:
    """Corpus BLEU-4 percent: unsmoothed geometric mean times brevity penalty.

    Orders with no hypothesis n-grams at all are skipped; an order with
    hypothesis n-grams but zero matches forces the score to zero.
    """
    import math

    if stats.hyp_len == 0:
        return 100.0 if stats.ref_len == 0 else 0.0
    log_sum = 0.0
    for m, t in zip(stats.matches, stats.totals):
        if t == 0:
            continue
        if m == 0:
            return 0.0
        log_sum += math.log(m / t) / MAX_BLEU_ORDER
    bp = 1.0 if stats.hyp_len >= stats.ref_len else math.exp(1.0 - stats.ref_len / stats.hyp_len)
    return 100.0 * bp * math.exp(log_sum)


def bleu(hyps: Sequence[Sentence], refs: Sequence[Sentence]) -> float:
    """Corpus-level BLEU-4 (percent) with clipped counts and brevity penalty."""
    if len(hyps) != len(refs):
        raise ValueError(f"hypothesis/reference count mismatch {len(hyps)} vs {len(refs)}")
    if not hyps:
        raise ValueError("empty corpus")
    total = BleuStats()
    for h, r in zip(hyps, refs):
        total = total + bleu_stats(h, r)
    return bleu_from_stats(total)


def sentence_bleu_smoothed(hyp: Sentence, ref: Sentence) -> float:
    """Sentence BLEU with add-1 smoothing for n >= 2, used in weight tuning."""
    import math

    stats = bleu_stats(hyp, ref)
    if stats.hyp_len == 0:
        return 100.0 if stats.ref_len == 0 else 0.0
    log_sum = 0.0
    for n, (m, t) in enumerate(zip(stats.matches, stats.totals), start=1):
        if n == 1:
            if t == 0:
                continue
            if m == 0:
                return 0.0
            log_sum += math.log(m / t) / MAX_BLEU_ORDER
        else:
            log_sum += math.log((m + 1) / (t + 1)) / MAX_BLEU_ORDER
    bp = 1.0 if stats.hyp_len >= stats.ref_len else math.exp(1.0 - stats.ref_len / stats.hyp_len)
    return 100.0 * bp * math.exp(log_sum)


# ---------------------------------------------------------------------------
# TER
# ---------------------------------------------------------------------------

def levenshtein(a: Sequence[str], b: Sequence[str]) -> int:
    """Word-level edit distance with unit costs."""
    prev = list(range(len(b) + 1))
    for i, ta in enumerate(a, start=1):
        cur = [i] + [0] * len(b)
        for j, tb in enumerate(b, start=1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ta != tb))
        prev = cur
    return prev[len(b)]


def ter_edits(hyp: Sentence, ref: Sentence) -> int:
    """Edit count with block shifts: greedy shift search plus Levenshtein.

    Each round applies the single shift (span removed and reinserted where
    the reference matches it exactly) that most reduces the remaining edit
    distance; every shift costs one edit.
    """
    cur = list(hyp)
    shifts = 0
    dist = levenshtein(cur, ref)
    while dist > 0:
        best_gain, best_state = 0, None
        for i in range(len(cur)):
            for length in range(1, min(MAX_SHIFT_LEN, len(cur) - i) + 1):
                span = cur[i : i + length]
                if span == list(ref[i : i + length]):
                    continue  # already aligned in place
                removed = cur[:i] + cur[i + length :]
                for k in range(len(ref) - length + 1):
                    if list(ref[k : k + length]) != span or k == i:
                        continue
                    pos = min(k, len(removed))
                    candidate = removed[:pos] + span + removed[pos:]
                    gain = dist - levenshtein(candidate, ref)
                    if gain > best_gain:
                        best_gain, best_state = gain, candidate
        if best_state is None or best_gain <= 1:
            # a shift costing 1 must beat the edits it saves
            break
        cur = best_state
        shifts += 1
        dist = levenshtein(cur, ref)
    return shifts + dist


def ter(hyp: Sentence, ref: Sentence) -> float:
    """Translation edit rate, percent of reference length."""
    if not ref:
        raise ValueError("empty reference")
    return 100.0 * ter_edits(hyp, ref) / len(ref)


def corpus_ter(hyps: Sequence[Sentence], refs: Sequence[Sentence]) -> float:
    if len(hyps) != len(refs):
        raise ValueError(f"hypothesis/reference count mismatch {len(hyps)} vs {len(refs)}")
    edits = sum(ter_edits(h, r) for h, r in zip(hyps, refs))
    ref_len = sum(len(r) for r in refs)
    if ref_len == 0:
        raise ValueError("empty reference corpus")
    return 100.0 * edits / ref_len


# ---------------------------------------------------------------------------
# Effort
# ---------------------------------------------------------------------------

def aggregate_effort(sessions: Sequence, refs: Sequence[Sentence]) -> tuple[float, float]:
    """Corpus WSR and MAR percentages.

    WSR normalizes total word strokes by reference word count; MAR
    normalizes total mouse actions by reference character count (of the
    detokenized text, spaces included).
    """
    if len(sessions) != len(refs):
        raise ValueError("one session per reference required")
    strokes = sum(s.word_strokes for s in sessions)
    actions = sum(s.mouse_actions for s in sessions)
    words = sum(len(r) for r in refs)
    chars = sum(len(detokenize(r)) for r in refs)
    wsr = 100.0 * strokes / words if words else 0.0
    mar = 100.0 * actions / chars if chars else 0.0
    return wsr, mar


# ---------------------------------------------------------------------------
# Approximate randomization
# ---------------------------------------------------------------------------

def _mean(values: Sequence) -> float:
    return sum(values) / len(values)


def approx_randomization(
    scores_a: Sequence,
    scores_b: Sequence,
    metric: Callable[[Sequence], float] = _mean,
    reps: int = 10000,
    seed: int = 0,
) -> float:
    """Paired randomization test on per-sentence metric components.

    Each repetition swaps every sentence's system assignment with
    probability one half; the p-value is the add-one-smoothed fraction of
    repetitions whose |metric(A) - metric(B)| reaches the observed one.
    """
    if len(scores_a) != len(scores_b):
        raise ValueError("score lists must align")
    if not scores_a:
        raise ValueError("empty score lists")
    observed = abs(metric(scores_a) - metric(scores_b))
    rng = random.Random(seed)
    hits = 0
    a, b = list(scores_a), list(scores_b)
    n = len(a)
    for _ in range(reps):
        pa, pb = [], []
        for i in range(n):
            if rng.random() < 0.5:
                pa.append(b[i])
                pb.append(a[i])
            else:
                pa.append(a[i])
                pb.append(b[i])
        if abs(metric(pa) - metric(pb)) >= observed - 1e-12:
            hits += 1
    return (hits + 1) / (reps + 1)


def exact_randomization(
    scores_a: Sequence,
    scores_b: Sequence,
    metric: Callable[[Sequence], float] = _mean,
) -> float:
    """Exhaustive version of the randomization test, for small n."""
    n = len(scores_a)
    if n != len(scores_b):
        raise ValueError("score lists must align")
    if n > 20:
        raise ValueError("exact enumeration limited to n <= 20")
    observed = abs(metric(scores_a) - metric(scores_b))
    hits = 0
    for mask in range(2 ** n):
        pa = [scores_b[i] if mask >> i & 1 else scores_a[i] for i in range(n)]
        pb = [scores_a[i] if mask >> i & 1 else scores_b[i] for i in range(n)]
        if abs(metric(pa) - metric(pb)) >= observed - 1e-12:
            hits += 1
    return hits / 2 ** n


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class SystemResult:
    system: str
    bleu: float | None = None
    ter: float | None = None
    wsr: float | None = None
    mar: float | None = None
    # p_values[other_system][metric] -> p
    p_values: dict = field(default_factory=dict)


@dataclass
class EvalReport:
    rows: list[SystemResult]
    alpha: float = 0.05

    def _marks(self, row: SystemResult, metric: str) -> str:
        marks = ""
        baseline = self.rows[0].system if self.rows else ""
        for other, ps in sorted(row.p_values.items()):
            p = ps.get(metric)
            if p is not None and p < self.alpha:
                marks += "†" if other == baseline else "‡"
        return marks

    def render_text(self) -> str:
        headers = ["System", "BLEU [↑]", "TER [↓]", "WSR [↓]", "MAR [↓]"]
        table = [headers]
        for row in self.rows:
            cells = [row.system]
            for metric in ("bleu", "ter", "wsr", "mar"):
                value = getattr(row, metric)
                if value is None:
                    cells.append("-")
                else:
                    cells.append(f"{value:.1f}{self._marks(row, metric)}")
            table.append(cells)
        widths = [max(len(r[i]) for r in table) for i in range(len(headers))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in table]
        lines.insert(1, "-" * len(lines[0]))
        return "\n".join(lines)

    def to_json(self) -> str:
        payload = [
            {
                "system": r.system,
                "bleu": r.bleu,
                "ter": r.ter,
                "wsr": r.wsr,
                "mar": r.mar,
                "p_values": r.p_values,
            }
            for r in self.rows
        ]
        return json.dumps(payload, indent=2, ensure_ascii=False)
