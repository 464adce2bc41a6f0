"""prefixmt: prefix-based interactive translation for text modernization.

A workbench around one interaction loop: a statistical or neural engine
proposes a modernized sentence, a user (real or simulated) corrects the
leftmost wrong word, and the engine regenerates the suffix behind the
validated prefix.  Ships corpus/BPE tooling, a phrase-based decoder with
word-graph suffix search, a small attention seq2seq with constrained
beam search, effort/quality metrics, and a correction HTTP service.
"""

__version__ = "0.1.0"

from .text import Sentence, detokenize, tokenize
from .corpus import (
    CorpusStats,
    ParallelCorpus,
    Vocabulary,
    corpus_stats,
    format_stats,
    load_parallel,
    make_corpus,
)
from .bpe import BpeModel, bpe_decode, bpe_encode, train_bpe
from .drift import DriftRule, load_rules, save_rules, synth_drift, synth_sentences
from .metrics import (
    EvalReport,
    SystemResult,
    aggregate_effort,
    approx_randomization,
    bleu,
    corpus_ter,
    exact_randomization,
    ter,
)
from .imt import (
    CopyGenerator,
    ImtSession,
    NeuralTranslator,
    ScriptedGenerator,
    SessionMetrics,
    SmtTranslator,
    SuffixGenerator,
    accept,
    apply_correction,
    leftmost_divergence,
    simulate_session,
    start_session,
)
