"""Shared fixtures: small trained engines reused across test modules."""

import pytest

import prefixmt as pm
from prefixmt.drift import DEFAULT_RULES, synth_drift, synth_sentences
from prefixmt.smt import LogLinearWeights, extract_phrases, train_ibm1, train_kn_lm
from prefixmt.smt.ibm1 import align_corpus


@pytest.fixture(scope="session")
def drift_corpus():
    """400-pair synthetic drift corpus (deterministic)."""
    sentences = synth_sentences(400, seed=21, vocab_size=40, min_len=3, max_len=9)
    return synth_drift(sentences, list(DEFAULT_RULES), seed=21)


@pytest.fixture(scope="session")
def smt_models(drift_corpus):
    train = pm.make_corpus(drift_corpus.pairs[:360])
    lex_st = train_ibm1(train, 5)
    reverse = pm.make_corpus([(t, s) for s, t in train])
    lex_ts = train_ibm1(reverse, 5)
    alignments = align_corpus(lex_st, lex_ts, train)
    phrase_table = extract_phrases(train, alignments, 4)
    lm = train_kn_lm(train.targets(), 3)
    return phrase_table, lm, LogLinearWeights()


@pytest.fixture(scope="session")
def smt_engine(smt_models):
    phrase_table, lm, weights = smt_models
    return pm.SmtTranslator(phrase_table, lm, weights, beam=12, distortion_limit=0)


@pytest.fixture(scope="session")
def drift_test_pairs(drift_corpus):
    return drift_corpus.pairs[360:400]


@pytest.fixture(scope="session")
def neural_setup():
    """A small model memorizing a 20-pair corpus, plus the corpus."""
    from prefixmt.bpe import bpe_encode, train_bpe
    from prefixmt.corpus import Vocabulary
    from prefixmt.neural.model import init_model
    from prefixmt.neural.training import TrainConfig, train

    sentences = synth_sentences(20, seed=5, vocab_size=25, min_len=3, max_len=6)
    corpus = synth_drift(sentences, list(DEFAULT_RULES), seed=5)
    bpe = train_bpe(corpus, 200)
    encoded = pm.make_corpus(
        [(bpe_encode(bpe, s), bpe_encode(bpe, t)) for s, t in corpus]
    )
    src_vocab = Vocabulary(sorted({t for s, _ in encoded for t in s}))
    tgt_vocab = Vocabulary(sorted({t for _, x in encoded for t in x}))
    model = init_model(32, (src_vocab, tgt_vocab), seed=7, bpe=bpe)
    model, _ = train(
        model, encoded, TrainConfig(learning_rate=0.002, batch_size=20,
                                    max_updates=300, seed=3)
    )
    return model, corpus


@pytest.fixture(scope="session")
def neural_model(neural_setup):
    return neural_setup[0]
