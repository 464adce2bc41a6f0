from prefixmt.drift import (
    DEFAULT_RULES,
    DriftRule,
    load_rules,
    save_rules,
    synth_drift,
    synth_sentences,
)
from prefixmt.text import tokenize


class TestSynthDrift:
    def test_empty_rules_identity(self):
        sents = [tokenize("hola mundo"), tokenize("adios")]
        corpus = synth_drift(sents, [], seed=0)
        assert all(src == tgt for src, tgt in corpus)

    def test_same_seed_identical(self):
        sents = synth_sentences(30, seed=4)
        rules = [DriftRule("a", "e", prob=0.5), DriftRule("o", "u", prob=0.3)]
        c1 = synth_drift(sents, rules, seed=9)
        c2 = synth_drift(sents, rules, seed=9)
        assert c1.pairs == c2.pairs

    def test_different_seed_differs(self):
        sents = synth_sentences(30, seed=4)
        rules = [DriftRule("a", "e", prob=0.5)]
        c1 = synth_drift(sents, rules, seed=1)
        c2 = synth_drift(sents, rules, seed=2)
        assert c1.pairs != c2.pairs

    def test_ahora_rule(self):
        corpus = synth_drift([tokenize("por ahora")], [DriftRule("ahora", "aora")], seed=0)
        assert corpus.pairs[0][0] == ("por", "aora")
        assert corpus.pairs[0][1] == ("por", "ahora")

    def test_target_is_original(self):
        sents = synth_sentences(10, seed=8)
        corpus = synth_drift(sents, list(DEFAULT_RULES), seed=8)
        assert [t for _, t in corpus] == [tuple(s) for s in sents]

    def test_emptying_rule_keeps_original_token(self):
        corpus = synth_drift([("h",)], [DriftRule("h", "")], seed=0)
        assert corpus.pairs[0][0] == ("h",)


class TestRuleFiles:
    def test_roundtrip(self, tmp_path):
        rules = [DriftRule("ahora", "aora"), DriftRule("v", "u")]
        save_rules(rules, tmp_path / "rules.tsv")
        text = (tmp_path / "rules.tsv").read_text(encoding="utf-8")
        assert text == "ahora\taora\nv\tu\n"
        assert load_rules(tmp_path / "rules.tsv") == rules


class TestSynthSentences:
    def test_deterministic(self):
        assert synth_sentences(15, seed=2) == synth_sentences(15, seed=2)

    def test_count_and_shape(self):
        sents = synth_sentences(25, seed=2, min_len=3, max_len=7)
        assert len(sents) == 25
        # length includes the trailing punctuation token
        assert all(4 <= len(s) <= 8 for s in sents)
