"""Command-line entry points for the full modernization pipeline."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .corpus import ParallelCorpus, corpus_stats, format_stats, load_parallel
from .metrics import (
    EvalReport,
    SystemResult,
    aggregate_effort,
    approx_randomization,
    bleu,
    bleu_stats,
    bleu_from_stats,
    corpus_ter,
    ter_edits,
)
from .text import Sentence, detokenize, tokenize


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prefixmt",
        description="Interactive historical-text modernization workbench",
    )
    parser.add_argument("--version", action="version", version=f"prefixmt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth-corpus", help="generate a synthetic drift corpus")
    p.add_argument("--sentences", type=int, required=True)
    p.add_argument("--out-src", required=True)
    p.add_argument("--out-tgt", required=True)
    p.add_argument("--rules", help="rule file (pattern<TAB>replacement); default built-ins")
    p.add_argument("--vocab-size", type=int, default=60)
    p.add_argument("--seed", type=int, required=True)

    p = sub.add_parser("train-smt", help="train the phrase-based engine")
    p.add_argument("--train-src", required=True)
    p.add_argument("--train-tgt", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--lm-order", type=int, default=5)
    p.add_argument("--em-iterations", type=int, default=10)
    p.add_argument("--max-phrase-len", type=int, default=4)
    p.add_argument("--beam", type=int, default=16)
    p.add_argument("--distortion-limit", type=int, default=0)
    p.add_argument("--tune-src")
    p.add_argument("--tune-tgt")
    p.add_argument("--tune-rounds", type=int, default=0)
    p.add_argument("--seed", type=int, help="required when tuning")

    p = sub.add_parser("train-nmt", help="train the neural engine")
    p.add_argument("--train-src", required=True)
    p.add_argument("--train-tgt", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--dims", type=int, default=64)
    p.add_argument("--merges", type=int, default=1000)
    p.add_argument("--updates", type=int, default=500)
    p.add_argument("--batch-size", type=int, default=60)
    p.add_argument("--learning-rate", type=float, default=0.0002)
    p.add_argument("--label-smoothing", type=float, default=0.1)
    p.add_argument("--beam-size", type=int, default=6)
    p.add_argument("--seed", type=int, required=True)

    p = sub.add_parser("modernize", help="batch-decode a file")
    p.add_argument("--engine", choices=["smt", "neural"], required=True)
    p.add_argument("--model-dir")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)

    p = sub.add_parser("imt-simulate", help="simulated-user interactive run over a test set")
    p.add_argument("--engine", choices=["smt", "neural"], required=True)
    p.add_argument("--model-dir")
    p.add_argument("--test", required=True, metavar="SRC,REF", help="comma-separated file pair")
    p.add_argument("--trace", help="write per-iteration session traces here")
    p.add_argument("--json", dest="json_out", help="write the report as JSON here")

    p = sub.add_parser("evaluate", help="quality report for hypothesis files")
    p.add_argument("--ref", required=True)
    p.add_argument("--hyp", action="append", required=True, metavar="NAME=PATH")
    p.add_argument("--baseline-src", help="score the raw source as a baseline row")
    p.add_argument("--reps", type=int, default=10000, help="randomization repetitions")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", dest="json_out")

    p = sub.add_parser("serve", help="run the correction HTTP service")
    p.add_argument("--model-dir")
    p.add_argument("--port", type=int, default=8099)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--static-dir")
    p.add_argument("--journal")

    return parser


def _model_dir(args) -> Path:
    import os

    if args.model_dir:
        return Path(args.model_dir)
    env = os.environ.get("IMT_MODEL_DIR")
    if env:
        return Path(env)
    raise RuntimeError("no model directory: pass --model-dir or set IMT_MODEL_DIR")


def _read_sentences(path: str) -> list[Sentence]:
    return [tokenize(line) for line in Path(path).read_text(encoding="utf-8").splitlines()]


def _write_sentences(path: str | Path, sentences) -> None:
    Path(path).write_text(
        "".join(detokenize(s) + "\n" for s in sentences), encoding="utf-8"
    )


def cmd_synth_corpus(args) -> int:
    from .drift import DEFAULT_RULES, load_rules, synth_drift, synth_sentences

    rules = load_rules(args.rules) if args.rules else list(DEFAULT_RULES)
    sentences = synth_sentences(args.sentences, seed=args.seed, vocab_size=args.vocab_size)
    corpus = synth_drift(sentences, rules, seed=args.seed)
    _write_sentences(args.out_src, corpus.sources())
    _write_sentences(args.out_tgt, corpus.targets())
    print(f"wrote {len(corpus)} pairs; {format_stats(corpus_stats(corpus))}")
    return 0


def cmd_train_smt(args) -> int:
    from .smt.decoder import LogLinearWeights
    from .smt.ibm1 import align_corpus, train_ibm1
    from .smt.lm import train_kn_lm
    from .smt.phrases import extract_phrases
    from .smt.tune import tune_weights
    from .corpus import make_corpus

    corpus = load_parallel(args.train_src, args.train_tgt)
    print(f"train: {format_stats(corpus_stats(corpus))}")
    lex_st = train_ibm1(corpus, args.em_iterations)
    reverse = make_corpus([(t, s) for s, t in corpus])
    lex_ts = train_ibm1(reverse, args.em_iterations)
    alignments = align_corpus(lex_st, lex_ts, corpus)
    pt = extract_phrases(corpus, alignments, args.max_phrase_len)
    lm = train_kn_lm(corpus.targets(), args.lm_order)
    weights = LogLinearWeights()
    if args.tune_rounds > 0:
        if not (args.tune_src and args.tune_tgt):
            print("error: --tune-rounds needs --tune-src/--tune-tgt", file=sys.stderr)
            return 2
        if args.seed is None:
            print("error: tuning is stochastic; --seed required", file=sys.stderr)
            return 2
        dev = load_parallel(args.tune_src, args.tune_tgt)
        weights = tune_weights(
            pt, lm, dev, weights, rounds=args.tune_rounds,
            beam=args.beam, distortion_limit=args.distortion_limit, seed=args.seed,
        )
    out = Path(args.out_dir) / "smt"
    out.mkdir(parents=True, exist_ok=True)
    pt.save(out / "phrase_table.txt")
    lm.save_arpa(out / "lm.arpa")
    weights.save(out / "weights.tsv")
    (out / "config.json").write_text(
        json.dumps({"beam": args.beam, "distortion_limit": args.distortion_limit}),
        encoding="utf-8",
    )
    print(f"wrote SMT engine to {out}")
    return 0


def cmd_train_nmt(args) -> int:
    from .bpe import bpe_encode, train_bpe
    from .corpus import Vocabulary, make_corpus
    from .neural.model import init_model
    from .neural.training import TrainConfig, train

    corpus = load_parallel(args.train_src, args.train_tgt)
    print(f"train: {format_stats(corpus_stats(corpus))}")
    bpe = train_bpe(corpus, args.merges)
    encoded = make_corpus(
        [(bpe_encode(bpe, s), bpe_encode(bpe, t)) for s, t in corpus]
    )
    src_vocab = Vocabulary(sorted({tok for s, _ in encoded for tok in s}))
    tgt_vocab = Vocabulary(sorted({tok for _, t in encoded for tok in t}))
    model = init_model(args.dims, (src_vocab, tgt_vocab), seed=args.seed, bpe=bpe)
    cfg = TrainConfig(
        learning_rate=args.learning_rate,
        batch_size=args.batch_size,
        label_smoothing=args.label_smoothing,
        max_updates=args.updates,
        seed=args.seed,
    )
    model, trace = train(model, encoded, cfg)
    if trace:
        print(f"loss: first {trace[0]:.4f} last {trace[-1]:.4f} over {len(trace)} updates")
    out = Path(args.out_dir) / "neural"
    out.mkdir(parents=True, exist_ok=True)
    model.save(out / "model.npz")
    (out / "config.json").write_text(
        json.dumps({"beam_size": args.beam_size, "max_output_len": 80}), encoding="utf-8"
    )
    print(f"wrote neural engine to {out}")
    return 0


def _load_engine(args):
    from .service import load_engines

    registry = load_engines(_model_dir(args))
    if args.engine not in registry:
        raise RuntimeError(f"engine {args.engine!r} not found under {_model_dir(args)}")
    return registry.get(args.engine)


def cmd_modernize(args) -> int:
    engine = _load_engine(args)
    sources = _read_sentences(args.input)
    outputs = [engine.translate(x).tokens for x in sources]
    _write_sentences(args.output, outputs)
    print(f"modernized {len(sources)} sentences -> {args.output}")
    return 0


def cmd_imt_simulate(args) -> int:
    from .imt import simulate_session

    engine = _load_engine(args)
    src_path, ref_path = args.test.split(",")
    sources = _read_sentences(src_path)
    refs = _read_sentences(ref_path)
    if len(sources) != len(refs):
        raise RuntimeError(f"test files misaligned: {len(sources)} vs {len(refs)} lines")
    trace: list[str] | None = [] if args.trace else None
    sessions = []
    for x, ref in zip(sources, refs):
        sessions.append(simulate_session(engine, x, ref, trace=trace))
    wsr, mar = aggregate_effort(sessions, refs)
    print("System  WSR [↓]  MAR [↓]")
    print(f"{args.engine:<7} {wsr:7.1f}  {mar:7.1f}")
    if args.trace:
        Path(args.trace).write_text("\n".join(trace) + "\n", encoding="utf-8")
    if args.json_out:
        payload = {"system": args.engine, "wsr": wsr, "mar": mar,
                   "sentences": len(sessions)}
        Path(args.json_out).write_text(json.dumps(payload, indent=2), encoding="utf-8")
    return 0


def cmd_evaluate(args) -> int:
    refs = _read_sentences(args.ref)
    systems: list[tuple[str, list[Sentence]]] = []
    if args.baseline_src:
        systems.append(("baseline", _read_sentences(args.baseline_src)))
    for spec_arg in args.hyp:
        if "=" in spec_arg:
            name, path = spec_arg.split("=", 1)
        else:
            name, path = Path(spec_arg).stem, spec_arg
        systems.append((name, _read_sentences(path)))
    for name, hyps in systems:
        if len(hyps) != len(refs):
            raise RuntimeError(f"{name}: {len(hyps)} hypotheses vs {len(refs)} references")

    def bleu_metric(components):
        total = components[0]
        for st in components[1:]:
            total = total + st
        return bleu_from_stats(total)

    def ter_metric(components):
        edits = sum(e for e, _ in components)
        length = sum(l for _, l in components)
        return 100.0 * edits / length

    per_system = {}
    for name, hyps in systems:
        per_system[name] = {
            "bleu_comp": [bleu_stats(h, r) for h, r in zip(hyps, refs)],
            "ter_comp": [(ter_edits(h, r), len(r)) for h, r in zip(hyps, refs)],
        }
    rows = []
    for name, hyps in systems:
        row = SystemResult(name, bleu=bleu(hyps, refs), ter=corpus_ter(hyps, refs))
        for other, _ in systems:
            if other == name:
                continue
            row.p_values[other] = {
                "bleu": approx_randomization(
                    per_system[name]["bleu_comp"], per_system[other]["bleu_comp"],
                    metric=bleu_metric, reps=args.reps, seed=args.seed,
                ),
                "ter": approx_randomization(
                    per_system[name]["ter_comp"], per_system[other]["ter_comp"],
                    metric=ter_metric, reps=args.reps, seed=args.seed,
                ),
            }
        rows.append(row)
    report = EvalReport(rows)
    print(report.render_text())
    if args.json_out:
        Path(args.json_out).write_text(report.to_json(), encoding="utf-8")
    return 0


def cmd_serve(args) -> int:
    from .service import SessionStore, load_engines, make_handler
    from http.server import ThreadingHTTPServer

    registry = load_engines(_model_dir(args))
    if not registry.names():
        raise RuntimeError(f"no engines found under {_model_dir(args)}")
    store = SessionStore(journal_path=args.journal)
    handler = make_handler(registry, store, args.static_dir)
    server = ThreadingHTTPServer((args.host, args.port), handler)
    print(f"serving engines {registry.names()} on http://{args.host}:{args.port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return 0


_COMMANDS = {
    "synth-corpus": cmd_synth_corpus,
    "train-smt": cmd_train_smt,
    "train-nmt": cmd_train_nmt,
    "modernize": cmd_modernize,
    "imt-simulate": cmd_imt_simulate,
    "evaluate": cmd_evaluate,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (RuntimeError, FileNotFoundError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
