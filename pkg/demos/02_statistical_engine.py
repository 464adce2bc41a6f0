"""Phrase-based pipeline: alignment, phrases, LM, decoding, word graphs.

Run:  python demos/02_statistical_engine.py
"""

from prefixmt import detokenize, make_corpus
from prefixmt.drift import DEFAULT_RULES, synth_drift, synth_sentences
from prefixmt.smt import (
    LogLinearWeights,
    align_corpus,
    decode,
    extract_phrases,
    graph_suffix,
    train_ibm1,
    train_kn_lm,
)

print("== Data ==")
sentences = synth_sentences(1200, seed=7, vocab_size=50)
corpus = synth_drift(sentences, list(DEFAULT_RULES), seed=7)
train = make_corpus(corpus.pairs[:1100])
test = corpus.pairs[1100:]
print(f"  {len(train)} training pairs, {len(test)} held out")

print()
print("== Word alignment (EM) ==")
lex_st = train_ibm1(train, iterations=5)
lex_ts = train_ibm1(make_corpus([(t, s) for s, t in train]), iterations=5)
trace = lex_st.log_likelihoods
print(f"  log-likelihood {trace[0]:.1f} -> {trace[-1]:.1f} over {len(trace) - 1} iterations")

print()
print("== Phrase table and language model ==")
alignments = align_corpus(lex_st, lex_ts, train)
phrase_table = extract_phrases(train, alignments, max_len=4)
lm = train_kn_lm(train.targets(), order=5)
print(f"  {len(phrase_table.entries)} source phrases, 5-gram Kneser-Ney LM")

print()
print("== Decoding to a word graph ==")
weights = LogLinearWeights()
source, reference = test[0]
hypothesis, graph = decode(phrase_table, lm, weights, source, beam=16)
print(f"  source:     {detokenize(source)}")
print(f"  1-best:     {detokenize(hypothesis.tokens)}  (score {hypothesis.score:.3f})")
print(f"  reference:  {detokenize(reference)}")
print(f"  graph size: {graph.n_nodes} nodes, {len(graph.edges)} edges")

print()
print("== Error-correcting suffix search ==")
print("  A validated prefix need not exist verbatim in the graph; the search")
print("  finds the closest path-prefix by word edit distance and completes it.")
prefix = reference[:2]
suffix = graph_suffix(graph, prefix)
print(f"  prefix {list(prefix)} -> suffix {list(suffix)}")
print(f"  new hypothesis: {detokenize(prefix + suffix)}")
