"""Neural engine: training a small attention model and constrained search.

Run:  python demos/04_neural_engine.py   (about a minute of training)
"""

from prefixmt import bpe_encode, detokenize, make_corpus, train_bpe
from prefixmt.corpus import Vocabulary
from prefixmt.drift import DEFAULT_RULES, synth_drift, synth_sentences
from prefixmt.neural import (
    BeamConfig,
    TrainConfig,
    beam_decode,
    init_model,
    prefix_decode,
    train,
)

print("== Data and subword vocabularies ==")
sentences = synth_sentences(60, seed=19, vocab_size=30, min_len=3, max_len=7)
corpus = synth_drift(sentences, list(DEFAULT_RULES), seed=19)
bpe = train_bpe(corpus, num_merges=250)
encoded = make_corpus([(bpe_encode(bpe, s), bpe_encode(bpe, t)) for s, t in corpus])
src_vocab = Vocabulary(sorted({t for s, _ in encoded for t in s}))
tgt_vocab = Vocabulary(sorted({t for _, x in encoded for t in x}))
print(f"  {len(corpus)} pairs, vocabularies {len(src_vocab)}/{len(tgt_vocab)} subwords")

print()
print("== Training ==")
print("  Bidirectional LSTM encoder, additive attention, LSTM decoder;")
print("  label-smoothed cross-entropy under adaptive-moment updates.")
model = init_model(dims=32, vocabs=(src_vocab, tgt_vocab), seed=1, bpe=bpe)
config = TrainConfig(learning_rate=0.002, batch_size=30, label_smoothing=0.1,
                     max_updates=400, seed=1)
model, trace = train(model, encoded, config)
print(f"  loss {trace[0]:.3f} -> {trace[-1]:.3f} over {len(trace)} updates")

print()
print("== Beam search ==")
cfg = BeamConfig(beam_size=6, max_output_len=40)
source, reference = corpus.pairs[3]
hyp = beam_decode(model, source, cfg)
print(f"  source:    {detokenize(source)}")
print(f"  decoded:   {detokenize(hyp.tokens)}")
print(f"  reference: {detokenize(reference)}")

print()
print("== Prefix-constrained search ==")
print("  The validated prefix is re-encoded to subwords and force-fed;")
print("  after the forced path, the first free token must start a word, so")
print("  the validated word can never be glued into a non-word.")
prefix = reference[:2]
suffix = prefix_decode(model, source, prefix, cfg)
print(f"  prefix {list(prefix)} -> suffix {list(suffix)}")
print(f"  hypothesis: {detokenize(prefix + suffix)}")
assert detokenize(prefix + suffix).startswith(detokenize(prefix))
