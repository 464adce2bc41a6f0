"""Quality/effort evaluation with significance marks, report-style output.

Run:  python demos/05_evaluation_report.py
"""

from prefixmt import (
    CopyGenerator,
    aggregate_effort,
    approx_randomization,
    bleu,
    corpus_ter,
    make_corpus,
    simulate_session,
)
from prefixmt.drift import DEFAULT_RULES, synth_drift, synth_sentences
from prefixmt.imt import SmtTranslator
from prefixmt.metrics import EvalReport, SystemResult, bleu_from_stats, bleu_stats, ter_edits
from prefixmt.smt import (
    LogLinearWeights,
    align_corpus,
    extract_phrases,
    train_ibm1,
    train_kn_lm,
)

print("== Systems under evaluation ==")
sentences = synth_sentences(1100, seed=23, vocab_size=55)
corpus = synth_drift(sentences, list(DEFAULT_RULES), seed=23)
train = make_corpus(corpus.pairs[:1000])
test = corpus.pairs[1000:]
sources = [s for s, _ in test]
refs = [t for _, t in test]

lex_st = train_ibm1(train, 5)
lex_ts = train_ibm1(make_corpus([(t, s) for s, t in train]), 5)
phrase_table = extract_phrases(train, align_corpus(lex_st, lex_ts, train), 4)
lm = train_kn_lm(train.targets(), 5)
smt = SmtTranslator(phrase_table, lm, LogLinearWeights(), beam=16)

baseline_hyps = sources  # the raw source as "modernization"
smt_hyps = [smt.translate(x).tokens for x in sources]
print(f"  baseline = copy the source; smt = phrase-based engine; {len(refs)} sentences")

print()
print("== Quality, with approximate-randomization significance ==")
systems = {"baseline": baseline_hyps, "smt": smt_hyps}
components = {
    name: {
        "bleu": [bleu_stats(h, r) for h, r in zip(hyps, refs)],
        "ter": [(ter_edits(h, r), len(r)) for h, r in zip(hyps, refs)],
    }
    for name, hyps in systems.items()
}


def corpus_bleu_metric(stats):
    total = stats[0]
    for st in stats[1:]:
        total = total + st
    return bleu_from_stats(total)


def corpus_ter_metric(pairs):
    return 100.0 * sum(e for e, _ in pairs) / sum(n for _, n in pairs)


rows = []
for name, hyps in systems.items():
    row = SystemResult(name, bleu=bleu(hyps, refs), ter=corpus_ter(hyps, refs))
    if name != "baseline":
        row.p_values["baseline"] = {
            "bleu": approx_randomization(
                components[name]["bleu"], components["baseline"]["bleu"],
                metric=corpus_bleu_metric, reps=2000, seed=0,
            ),
            "ter": approx_randomization(
                components[name]["ter"], components["baseline"]["ter"],
                metric=corpus_ter_metric, reps=2000, seed=0,
            ),
        }
    rows.append(row)

# effort from simulated sessions
for row, generator in zip(rows, (CopyGenerator(), smt)):
    sessions = [simulate_session(generator, x, ref) for x, ref in test]
    row.wsr, row.mar = aggregate_effort(sessions, refs)

report = EvalReport(rows)
print(report.render_text())
print()
print("  † marks a significant difference against the baseline (p < 0.05)")
print()
print("== Machine-readable form ==")
print(report.to_json())
