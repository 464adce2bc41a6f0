"""Corpus tooling walkthrough: tokenization, statistics, drift, subwords.

Run:  python demos/01_corpus_and_subwords.py
"""

from prefixmt import (
    bpe_decode,
    bpe_encode,
    corpus_stats,
    detokenize,
    format_stats,
    tokenize,
    train_bpe,
)
from prefixmt.drift import DEFAULT_RULES, synth_drift, synth_sentences

print("== Tokenization ==")
for text in ("To be, or not to be?", "¡Bendito sea Dios, que me dejó!"):
    tokens = tokenize(text)
    print(f"  {text!r}")
    print(f"    -> {list(tokens)}")
    print(f"    -> back: {detokenize(tokens)!r}")

print()
print("== Synthetic historical drift ==")
print("  No real historical corpus ships with this package, so experiments")
print("  perturb modern text with spelling-drift rules (v->u, j->x, dropped h,")
print("  archaic word forms) and treat the perturbed text as the source.")
modern = synth_sentences(2000, seed=42, vocab_size=60)
corpus = synth_drift(modern, list(DEFAULT_RULES), seed=42)
src, tgt = corpus.pairs[0]
print(f"  historical: {detokenize(src)}")
print(f"  modern:     {detokenize(tgt)}")
print(f"  statistics: {format_stats(corpus_stats(corpus))}")

print()
print("== Byte pair encoding ==")
bpe = train_bpe(corpus, num_merges=150)
print(f"  trained {bpe.num_merges} merges jointly over both sides")
print(f"  first merges: {list(bpe.merges[:8])}")
word = tgt[:1]
pieces = bpe_encode(bpe, word)
print(f"  {word[0]!r} -> {list(pieces)} -> {bpe_decode(pieces)[0]!r}")
sentence = tgt[:5]
encoded = bpe_encode(bpe, sentence)
assert bpe_decode(encoded) == sentence
print(f"  round trip holds on {detokenize(sentence)!r}")
