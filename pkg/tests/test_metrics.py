"""Quality metric tests against independent brute-force oracles."""

import itertools
import math
import random

import pytest

from prefixmt.metrics import (
    bleu,
    corpus_ter,
    levenshtein,
    sentence_bleu_smoothed,
    ter,
    ter_edits,
)


# ---------------------------------------------------------------------------
# oracle implementations (kept deliberately naive and separate)
# ---------------------------------------------------------------------------

def oracle_bleu(hyps, refs):
    """Corpus BLEU-4 straight from the definition, no shared code."""
    log_precisions = []
    for n in range(1, 5):
        matches = 0
        total = 0
        for hyp, ref in zip(hyps, refs):
            hyp_ngrams = [tuple(hyp[i : i + n]) for i in range(len(hyp) - n + 1)]
            ref_ngrams = [tuple(ref[i : i + n]) for i in range(len(ref) - n + 1)]
            total += len(hyp_ngrams)
            for g in set(hyp_ngrams):
                matches += min(hyp_ngrams.count(g), ref_ngrams.count(g))
        if total == 0:
            continue
        if matches == 0:
            return 0.0
        log_precisions.append(math.log(matches / total))
    c = sum(len(h) for h in hyps)
    r = sum(len(r_) for r_ in refs)
    if c == 0:
        return 100.0 if r == 0 else 0.0
    bp = 1.0 if c >= r else math.exp(1 - r / c)
    return 100.0 * bp * math.exp(sum(log_precisions) / 4)


def oracle_levenshtein(a, b):
    table = {}
    for i in range(len(a) + 1):
        for j in range(len(b) + 1):
            if i == 0 or j == 0:
                table[i, j] = i + j
            else:
                table[i, j] = min(
                    table[i - 1, j] + 1,
                    table[i, j - 1] + 1,
                    table[i - 1, j - 1] + (a[i - 1] != b[j - 1]),
                )
    return table[len(a), len(b)]


class TestBleu:
    def test_identical_exact_100(self):
        hyps = [("a", "b", "c", "d"), ("x", "y")]
        assert bleu(hyps, hyps) == 100.0

    def test_zero_three_gram_matches(self):
        # one substitution kills every 3-gram: unsmoothed geometric mean -> 0
        assert bleu([("a", "b", "c", "d")], [("a", "b", "x", "d")]) == 0.0

    def test_brevity_penalty(self):
        # "a b" vs "a b c d": p1 = p2 = 1, BP = exp(1 - 4/2)
        value = bleu([("a", "b")], [("a", "b", "c", "d")])
        assert value == pytest.approx(100.0 * math.exp(-1.0), abs=1e-9)

    def test_against_oracle_hand_pairs(self):
        cases = [
            (("a", "b", "c", "d"), ("a", "b", "c", "d")),
            (("a", "b", "c", "d"), ("a", "b", "x", "d")),
            (("a", "b"), ("a", "b", "c", "d")),
            (("the", "cat", "sat"), ("the", "cat", "sat", "down")),
            (("the", "the", "the"), ("the", "cat")),
            (("x",), ("x",)),
            (("x", "y", "z", "w", "v"), ("x", "y", "z", "w", "v")),
            (("a", "a", "b", "b"), ("a", "b", "a", "b")),
            ((), ("a",)),
            (("q", "w", "e", "r", "t"), ("q", "w", "e", "r", "t", "y")),
        ]
        hyps = [h for h, _ in cases]
        refs = [r for _, r in cases]
        assert bleu(hyps, refs) == pytest.approx(oracle_bleu(hyps, refs), abs=1e-4)
        for h, r in cases:
            if r:
                assert bleu([h], [r]) == pytest.approx(oracle_bleu([h], [r]), abs=1e-4)

    def test_against_oracle_random(self):
        rng = random.Random(5)
        vocab = "abcde"
        hyps, refs = [], []
        for _ in range(40):
            hyps.append(tuple(rng.choice(vocab) for _ in range(rng.randint(0, 9))))
            refs.append(tuple(rng.choice(vocab) for _ in range(rng.randint(1, 9))))
        assert bleu(hyps, refs) == pytest.approx(oracle_bleu(hyps, refs), abs=1e-6)

    def test_corpus_permutation_invariance(self):
        rng = random.Random(6)
        hyps = [tuple(rng.choice("ab") for _ in range(5)) for _ in range(12)]
        refs = [tuple(rng.choice("ab") for _ in range(5)) for _ in range(12)]
        perm = list(range(12))
        rng.shuffle(perm)
        assert bleu(hyps, refs) == pytest.approx(
            bleu([hyps[i] for i in perm], [refs[i] for i in perm]), abs=1e-12
        )

    def test_mismatched_lengths_error(self):
        with pytest.raises(ValueError):
            bleu([("a",)], [("a",), ("b",)])

    def test_smoothed_sentence_bleu_nonzero(self):
        assert sentence_bleu_smoothed(("a", "b"), ("a", "c")) > 0.0


class TestTer:
    def test_identical_zero(self):
        assert ter(("a", "b"), ("a", "b")) == 0.0

    def test_single_shift(self):
        assert ter(("b", "a"), ("a", "b")) == 50.0

    def test_insertion(self):
        assert ter(("a",), ("a", "b")) == 50.0

    def test_empty_reference_error(self):
        with pytest.raises(ValueError):
            ter(("a",), ())

    def test_shift_beats_two_substitutions(self):
        # moving "c d" home saves two edits at the cost of one shift
        hyp = ("c", "d", "a", "b")
        ref = ("a", "b", "c", "d")
        assert ter_edits(hyp, ref) == 1

    def test_never_worse_than_levenshtein(self):
        rng = random.Random(11)
        for _ in range(200):
            hyp = tuple(rng.choice("abc") for _ in range(rng.randint(0, 6)))
            ref = tuple(rng.choice("abc") for _ in range(rng.randint(1, 6)))
            edits = ter_edits(hyp, ref)
            assert edits <= oracle_levenshtein(hyp, ref)
            assert (edits == 0) == (hyp == ref)

    def test_levenshtein_against_oracle(self):
        rng = random.Random(12)
        for _ in range(100):
            a = tuple(rng.choice("abcd") for _ in range(rng.randint(0, 6)))
            b = tuple(rng.choice("abcd") for _ in range(rng.randint(0, 6)))
            assert levenshtein(a, b) == oracle_levenshtein(a, b)

    def test_corpus_aggregate(self):
        hyps = [("a", "b"), ("x",)]
        refs = [("a", "b"), ("y",)]
        # 0 edits + 1 edit over 3 reference words
        assert corpus_ter(hyps, refs) == pytest.approx(100.0 / 3)
