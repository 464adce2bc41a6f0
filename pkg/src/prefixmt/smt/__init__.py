"""Phrase-based statistical engine: alignment, phrases, LM, decoding."""

from .ibm1 import LexicalTable, align_corpus, align_pair, train_ibm1
from .phrases import PhraseTable, extract_phrases
from .lm import NGramLanguageModel, lm_score, train_kn_lm
from .wordgraph import Edge, SuffixResult, WordGraph, graph_suffix
from .decoder import FEATURE_NAMES, Hypothesis, LogLinearWeights, decode
from .tune import tune_weights
