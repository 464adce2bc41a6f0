"""Beam decoder tests, including a brute-force derivation oracle."""

import itertools
import math

import pytest

from prefixmt.corpus import BOS, EOS, make_corpus
from prefixmt.smt.decoder import FEATURE_NAMES, LogLinearWeights, decode
from prefixmt.smt.lm import train_kn_lm
from prefixmt.smt.phrases import PhraseTable
from prefixmt.smt.wordgraph import graph_suffix
from prefixmt.text import tokenize


@pytest.fixture(scope="module")
def uniform_lm():
    # several sentences so every test token is in-vocabulary
    sents = [tokenize(s) for s in ("x y z w", "w z y x", "a b", "b a")]
    return train_kn_lm(sents, 2)


def table(entries, max_len=2):
    return PhraseTable(
        {src: tuple(opts) for src, opts in entries.items()}, max_len
    )


class TestDecodeBasics:
    def test_identity_table_copies_source(self, uniform_lm):
        pt = table({
            ("a",): [(("a",), 1.0, 1.0)],
            ("b",): [(("b",), 1.0, 1.0)],
        })
        hyp, _ = decode(pt, uniform_lm, LogLinearWeights(), tokenize("a b"), beam=8)
        assert hyp.tokens == ("a", "b")

    def test_oov_passthrough(self, uniform_lm):
        pt = table({("a",): [(("x",), 1.0, 1.0)]})
        hyp, _ = decode(pt, uniform_lm, LogLinearWeights(), tokenize("a qqq"), beam=8)
        assert hyp.tokens == ("x", "qqq")

    def test_empty_source(self, uniform_lm):
        hyp, graph = decode(table({}), uniform_lm, LogLinearWeights(), (), beam=4)
        assert hyp.tokens == ()
        assert graph.viterbi()[0] == ()

    def test_beam_precondition(self, uniform_lm):
        with pytest.raises(ValueError):
            decode(table({}), uniform_lm, LogLinearWeights(), ("a",), beam=0)


class TestDerivationOracle:
    def test_two_word_source_matches_enumeration(self, uniform_lm):
        """2 words x 2 options each: enumerate all 4 monotone derivations."""
        options = {
            ("a",): [(("x",), 0.6, 0.5), (("y",), 0.4, 0.5)],
            ("b",): [(("z",), 0.7, 0.5), (("w",), 0.3, 0.5)],
        }
        pt = table(options)
        w = LogLinearWeights(
            tm_fwd=1.0, tm_bwd=0.7, lm=0.4, word_penalty=-0.1,
            phrase_penalty=-0.2, distortion=-1.0,
        )
        source = tokenize("a b")
        hyp, graph = decode(pt, uniform_lm, w, source, beam=16)

        def derivation_score(first, second):
            lm_lp = (
                uniform_lm.logprob(first[0][0], (BOS,))
                + uniform_lm.logprob(second[0][0], (first[0][0],))
                + uniform_lm.logprob(EOS, (second[0][0],))
            )
            tm_fwd = math.log10(first[1]) + math.log10(second[1])
            tm_bwd = math.log10(first[2]) + math.log10(second[2])
            return (
                w.tm_fwd * tm_fwd + w.tm_bwd * tm_bwd + w.lm * lm_lp
                + w.word_penalty * 2 + w.phrase_penalty * 2
            )

        best_tokens, best_score = None, float("-inf")
        for first in options[("a",)]:
            for second in options[("b",)]:
                score = derivation_score(first, second)
                if score > best_score:
                    best_tokens = first[0] + second[0]
                    best_score = score
        assert hyp.tokens == best_tokens
        assert hyp.score == pytest.approx(best_score, abs=1e-9)

    def test_one_best_equals_graph_viterbi(self, smt_models, drift_test_pairs):
        pt, lm, weights = smt_models
        for src, _ in drift_test_pairs[:10]:
            hyp, graph = decode(pt, lm, weights, src, beam=8)
            tokens, score = graph.viterbi()
            assert hyp.tokens == tokens
            assert hyp.score == pytest.approx(score, abs=1e-12)


class TestGraphInvariants:
    def _assert_coverage_paths(self, graph, n_source):
        """Every complete path covers all source positions exactly once."""
        labels = graph.node_labels
        assert labels is not None
        full = (1 << n_source) - 1
        for idx, e in enumerate(graph.edges):
            src_cov = int(labels[e.src].split("|")[0])
            if labels[e.dst] == "end":
                assert src_cov == full
            else:
                dst_cov = int(labels[e.dst].split("|")[0])
                assert src_cov & dst_cov == src_cov
                assert dst_cov != src_cov

    def test_paths_cover_source_exactly_once(self, smt_models, drift_test_pairs):
        pt, lm, weights = smt_models
        for src, _ in drift_test_pairs[:8]:
            _, graph = decode(pt, lm, weights, src, beam=8)
            self._assert_coverage_paths(graph, len(src))

    def test_scale_invariance_of_argmax(self, smt_models, drift_test_pairs):
        pt, lm, weights = smt_models
        doubled = LogLinearWeights.from_vector(
            [2 * v for v in weights.as_vector()]
        )
        for src, _ in drift_test_pairs[:8]:
            hyp1, _ = decode(pt, lm, weights, src, beam=8)
            hyp2, _ = decode(pt, lm, doubled, src, beam=8)
            assert hyp1.tokens == hyp2.tokens
            assert hyp2.score == pytest.approx(2 * hyp1.score, rel=1e-9)

    def test_suffix_of_empty_prefix_is_one_best(self, smt_models, drift_test_pairs):
        pt, lm, weights = smt_models
        for src, _ in drift_test_pairs[:8]:
            hyp, graph = decode(pt, lm, weights, src, beam=8)
            assert graph_suffix(graph, ()) == hyp.tokens


class TestWeightsFile:
    def test_roundtrip(self, tmp_path):
        w = LogLinearWeights(0.9, 1.1, 0.5, -0.3, 0.2, -0.7)
        w.save(tmp_path / "weights.tsv")
        text = (tmp_path / "weights.tsv").read_text(encoding="utf-8")
        assert text.splitlines()[0] == "tm_fwd\t0.9"
        assert LogLinearWeights.load(tmp_path / "weights.tsv") == w

    def test_feature_names_fixed(self):
        assert FEATURE_NAMES == (
            "tm_fwd", "tm_bwd", "lm", "word_penalty", "phrase_penalty", "distortion",
        )
