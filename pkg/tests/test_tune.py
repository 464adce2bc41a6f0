"""Weight tuning: envelope line search oracle and the improvement contract."""

import pytest

import prefixmt as pm
from prefixmt.metrics import bleu, bleu_stats
from prefixmt.smt.decoder import LogLinearWeights, decode
from prefixmt.smt.tune import line_search, tune_weights, upper_envelope


class TestUpperEnvelope:
    def test_single_line(self):
        assert upper_envelope([(1.0, 0.5, 0)]) == [(float("-inf"), 0)]

    def test_two_lines_one_crossing(self):
        # a=0,b=1 overtakes a=1,b=0 at x=1
        env = upper_envelope([(1.0, 0.0, 0), (0.0, 1.0, 1)])
        assert env[0] == (float("-inf"), 0)
        assert env[1][1] == 1
        assert env[1][0] == pytest.approx(1.0)

    def test_dominated_line_dropped(self):
        env = upper_envelope([(1.0, 0.0, 0), (0.0, 0.0, 1)])
        assert [idx for _, idx in env] == [0]

    def test_equal_slope_keeps_higher_intercept(self):
        env = upper_envelope([(0.0, 1.0, 0), (2.0, 1.0, 1)])
        assert [idx for _, idx in env] == [1]


class TestLineSearch:
    def test_hand_computed_crossing(self):
        """One sentence, two candidates, one crossing point.

        Candidate 0 ("a b", wrong) has feature f = (1, 0, ...);
        candidate 1 ("x y", the reference) has f = (0, 1, ...).
        With both weights at 1.0, searching dim 1 gives lines
        score0 = 1 (constant) and score1 = gamma: they cross at gamma=1,
        so any gamma > 1 selects the reference and lifts BLEU to 100.
        The midpoint convention places the optimum at 1 + 1 = 2.
        """
        ref = ("x", "y")
        pool = [
            (("a", "b"), (1.0, 0.0, 0.0, 0.0, 0.0, 0.0)),
            (("x", "y"), (0.0, 1.0, 0.0, 0.0, 0.0, 0.0)),
        ]
        gamma, best = line_search([pool], [ref], [1.0, 1.0, 0, 0, 0, 0], dim=1)
        assert gamma == pytest.approx(2.0)
        assert best == pytest.approx(100.0)

    def test_no_improvement_returns_none(self):
        ref = ("x", "y")
        pool = [(("x", "y"), (1.0, 0.0, 0.0, 0.0, 0.0, 0.0))]
        gamma, best = line_search([pool], [ref], [1.0] * 6, dim=0)
        assert gamma is None
        assert best == pytest.approx(100.0)


class TestTuneWeights:
    def test_zero_rounds_returns_init(self, smt_models, drift_corpus):
        pt, lm, _ = smt_models
        init = LogLinearWeights(0.3, 0.3, 0.3, 0.0, 0.0, -1.0)
        dev = pm.make_corpus(drift_corpus.pairs[360:380])
        assert tune_weights(pt, lm, dev, init, rounds=0) is init

    def test_dev_bleu_never_degrades(self, smt_models, drift_corpus):
        pt, lm, _ = smt_models
        # deliberately bad starting point: LM dominates, translation ignored
        init = LogLinearWeights(0.05, 0.0, 2.0, 0.8, 0.0, -1.0)
        dev = pm.make_corpus(drift_corpus.pairs[360:378])

        def dev_bleu(weights):
            hyps = [decode(pt, lm, weights, s, beam=8)[0].tokens for s, _ in dev]
            return bleu(hyps, dev.targets())

        before = dev_bleu(init)
        tuned = tune_weights(pt, lm, dev, init, rounds=2, beam=8, nbest=10, seed=4)
        after = dev_bleu(tuned)
        assert after >= before - 1e-9

    def test_deterministic_given_seed(self, smt_models, drift_corpus):
        pt, lm, _ = smt_models
        init = LogLinearWeights()
        dev = pm.make_corpus(drift_corpus.pairs[360:370])
        t1 = tune_weights(pt, lm, dev, init, rounds=1, beam=6, nbest=6, seed=9)
        t2 = tune_weights(pt, lm, dev, init, rounds=1, beam=6, nbest=6, seed=9)
        assert t1 == t2

    def test_empty_dev_error(self, smt_models):
        pt, lm, _ = smt_models
        with pytest.raises(ValueError):
            tune_weights(pt, lm, pm.make_corpus([]), LogLinearWeights(), rounds=1)
