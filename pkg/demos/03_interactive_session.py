"""The prefix-based interactive protocol, step by step and simulated.

Run:  python demos/03_interactive_session.py
"""

from prefixmt import (
    CopyGenerator,
    ScriptedGenerator,
    accept,
    aggregate_effort,
    apply_correction,
    detokenize,
    make_corpus,
    simulate_session,
    start_session,
    tokenize,
)
from prefixmt.drift import DEFAULT_RULES, synth_drift, synth_sentences
from prefixmt.imt import SmtTranslator
from prefixmt.smt import (
    LogLinearWeights,
    align_corpus,
    extract_phrases,
    train_ibm1,
    train_kn_lm,
)

print("== A session, correction by correction ==")
print("  The system proposes a modernization; the user fixes the leftmost")
print("  wrong word, which locks the prefix; the system rewrites the suffix.")
it0 = tokenize("Durmamos por ahora ambos, y después Dios dirá.")
it1 = tokenize("Durmamos de momento ambos, y después Dios dirá.")
it2 = tokenize("Durmamos de momento los dos, y después Dios dirá.")
engine = ScriptedGenerator({(): it0, it1[:2]: it1[2:], it2[:4]: it2[4:]})
source = tokenize("durmamos por aora entrambos, y despues, Dios dixo lo que sera.")

session = start_session(engine, source)
print(f"  IT-0  MT:   {detokenize(session.hypothesis)}")
apply_correction(session, 2, "de")
print(f"  IT-1  user: position 2 -> 'de'")
print(f"        MT:   {detokenize(session.hypothesis)}")
apply_correction(session, 4, "los")
print(f"  IT-2  user: position 4 -> 'los'")
print(f"        MT:   {detokenize(session.hypothesis)}")
metrics = accept(session)
print(f"  END   accepted with {metrics.word_strokes} word strokes, "
      f"{metrics.mouse_actions} mouse actions")

print()
print("== Simulated users over a test set ==")
sentences = synth_sentences(900, seed=3, vocab_size=50)
corpus = synth_drift(sentences, list(DEFAULT_RULES), seed=3)
train = make_corpus(corpus.pairs[:800])
test = corpus.pairs[800:]
lex_st = train_ibm1(train, 5)
lex_ts = train_ibm1(make_corpus([(t, s) for s, t in train]), 5)
phrase_table = extract_phrases(train, align_corpus(lex_st, lex_ts, train), 4)
lm = train_kn_lm(train.targets(), 5)
smt = SmtTranslator(phrase_table, lm, LogLinearWeights(), beam=16)

refs = [ref for _, ref in test]
for name, generator in (("copy baseline", CopyGenerator()), ("interactive SMT", smt)):
    sessions = [simulate_session(generator, x, ref) for x, ref in test]
    wsr, mar = aggregate_effort(sessions, refs)
    print(f"  {name:<16} WSR {wsr:5.1f}   MAR {mar:5.1f}")
print("  (lower is better: fraction of words typed / mouse actions per character)")
