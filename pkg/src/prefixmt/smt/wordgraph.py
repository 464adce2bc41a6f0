"""Weighted acyclic word graphs and prefix-constrained suffix search.

A graph node is a decoder state; an edge carries the target tokens it
emits, its per-feature scores and their weighted total.  Suffix search
finds the path-prefix closest to a user prefix in word edit distance
(ties go to the higher-scoring path-prefix) and completes it with the
best-scoring continuation to a final node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from ..text import Sentence

NEG_INF = float("-inf")


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    tokens: tuple[str, ...]
    features: tuple[float, ...]
    score: float


@dataclass(frozen=True)
class SuffixResult:
    suffix: Sentence
    edit_distance: int
    prefix_score: float
    completion_score: float


class WordGraph:
    def __init__(
        self,
        n_nodes: int,
        edges: Iterable[Edge],
        start: int,
        finals: Iterable[int],
        node_labels: Sequence[str] | None = None,
    ):
        self.n_nodes = n_nodes
        self.edges = list(edges)
        self.start = start
        self.finals = set(finals)
        self.node_labels = list(node_labels) if node_labels else None
        self.out_edges: list[list[int]] = [[] for _ in range(n_nodes)]
        for idx, e in enumerate(self.edges):
            self.out_edges[e.src].append(idx)
        self._topo = self._topological_order()

    # -- structure ----------------------------------------------------------

    def _topological_order(self) -> list[int]:
        indeg = [0] * self.n_nodes
        for e in self.edges:
            indeg[e.dst] += 1
        queue = [u for u in range(self.n_nodes) if indeg[u] == 0]
        order: list[int] = []
        while queue:
            u = queue.pop(0)
            order.append(u)
            for idx in self.out_edges[u]:
                v = self.edges[idx].dst
                indeg[v] -= 1
                if indeg[v] == 0:
                    queue.append(v)
        if len(order) != self.n_nodes:
            raise ValueError("word graph contains a cycle")
        return order

    def reachable_from_start(self) -> set[int]:
        seen = {self.start}
        stack = [self.start]
        while stack:
            u = stack.pop()
            for idx in self.out_edges[u]:
                v = self.edges[idx].dst
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    # -- best paths -----------------------------------------------------------

    def viterbi(self) -> tuple[Sentence, float]:
        """Highest-scoring token sequence from start to a final node."""
        if not self.finals:
            raise ValueError("word graph has no final node")
        comp = self._completion_scores()
        if comp[self.start] == NEG_INF:
            raise ValueError("no final node reachable from start")
        return tuple(self._completion_tokens(self.start, comp)), comp[self.start]

    def _completion_scores(self) -> list[float]:
        """Best score from each node to any final node (0 at finals)."""
        comp = [NEG_INF] * self.n_nodes
        for u in reversed(self._topo):
            if u in self.finals:
                comp[u] = 0.0
            for idx in self.out_edges[u]:
                e = self.edges[idx]
                if comp[e.dst] != NEG_INF:
                    comp[u] = max(comp[u], e.score + comp[e.dst])
        return comp

    def _completion_tokens(self, node: int, comp: list[float]) -> list[str]:
        tokens: list[str] = []
        u = node
        while not (u in self.finals and comp[u] == 0.0):
            best_idx = None
            for idx in self.out_edges[u]:
                e = self.edges[idx]
                if comp[e.dst] == NEG_INF:
                    continue
                if best_idx is None or e.score + comp[e.dst] > self.edges[
                    best_idx
                ].score + comp[self.edges[best_idx].dst] + 1e-12:
                    best_idx = idx
            if best_idx is None:
                break
            e = self.edges[best_idx]
            tokens.extend(e.tokens)
            u = e.dst
        return tokens

    def k_best(self, k: int) -> list[tuple[Sentence, float, tuple[float, ...]]]:
        """Up to k highest-scoring distinct token sequences with feature sums."""
        if not self.finals:
            raise ValueError("word graph has no final node")
        n_feats = len(self.edges[0].features) if self.edges else 0
        zero = tuple(0.0 for _ in range(n_feats))
        table: list[list[tuple[float, tuple[str, ...], tuple[float, ...]]]] = [
            [] for _ in range(self.n_nodes)
        ]
        table[self.start] = [(0.0, (), zero)]
        for u in self._topo:
            if not table[u]:
                continue
            for idx in self.out_edges[u]:
                e = self.edges[idx]
                extended = [
                    (
                        score + e.score,
                        tokens + e.tokens,
                        tuple(a + b for a, b in zip(feats, e.features)),
                    )
                    for score, tokens, feats in table[u]
                ]
                merged = table[e.dst] + extended
                seen: dict[tuple[str, ...], tuple[float, tuple[str, ...], tuple[float, ...]]] = {}
                for item in merged:
                    prev = seen.get(item[1])
                    if prev is None or item[0] > prev[0]:
                        seen[item[1]] = item
                table[e.dst] = sorted(seen.values(), key=lambda x: (-x[0], x[1]))[:k]
        finals: dict[tuple[str, ...], tuple[float, tuple[str, ...], tuple[float, ...]]] = {}
        for f in self.finals:
            for item in table[f]:
                prev = finals.get(item[1])
                if prev is None or item[0] > prev[0]:
                    finals[item[1]] = item
        ranked = sorted(finals.values(), key=lambda x: (-x[0], x[1]))[:k]
        return [(tokens, score, feats) for score, tokens, feats in ranked]

    def rescored(self, weights: Sequence[float]) -> "WordGraph":
        """Same topology with edge scores recomputed from the weight vector."""
        edges = [
            Edge(e.src, e.dst, e.tokens, e.features,
                 sum(w * f for w, f in zip(weights, e.features)))
            for e in self.edges
        ]
        return WordGraph(self.n_nodes, edges, self.start, self.finals, self.node_labels)

    # -- error-correcting suffix search ---------------------------------------

    def suffix_search(self, prefix: Sentence) -> SuffixResult:
        """Best suffix for a prefix that may not exist verbatim in the graph.

        States are graph nodes plus mid-edge positions, so matching may stop
        inside a multi-token edge.  An edge's score is granted on entry.
        Ranking: fewest edits, then highest total path score through the
        matched state, then highest path-prefix score.  The total-score
        tie-break keeps the two endpoint cases exact: an empty prefix
        reproduces the Viterbi path, and the full 1-best as prefix yields
        an empty suffix.
        """
        if not self.finals:
            raise ValueError("word graph has no final node")
        comp = self._completion_scores()
        prefix = tuple(prefix)
        K = len(prefix)

        # linearized DP states: every node, then mid-edge states per out-edge
        state_of_node: dict[int, int] = {}
        state_of_edge: dict[tuple[int, int], int] = {}
        states: list[tuple[str, int, int]] = []  # (kind, node_or_edge, consumed)
        for u in self._topo:
            state_of_node[u] = len(states)
            states.append(("node", u, 0))
            for idx in self.out_edges[u]:
                for p in range(1, len(self.edges[idx].tokens)):
                    state_of_edge[(idx, p)] = len(states)
                    states.append(("edge", idx, p))

        n_states = len(states)
        INF = (1 << 30, 0.0)
        dp = [[INF] * (K + 1) for _ in range(n_states)]
        dp[state_of_node[self.start]][0] = (0, 0.0)

        def relax(si: int, k: int, value: tuple[int, float]) -> None:
            if value < dp[si][k]:
                dp[si][k] = value

        for si in range(n_states):
            kind, ident, consumed = states[si]
            row = dp[si]
            # insertions: prefix word with no matching path token
            for k in range(K):
                if row[k][0] < INF[0]:
                    cand = (row[k][0] + 1, row[k][1])
                    if cand < row[k + 1]:
                        row[k + 1] = cand
            if kind == "node":
                for idx in self.out_edges[ident]:
                    e = self.edges[idx]
                    if not e.tokens:
                        ni = state_of_node[e.dst]
                        for k in range(K + 1):
                            if row[k][0] < INF[0]:
                                relax(ni, k, (row[k][0], row[k][1] - e.score))
                        continue
                    tok = e.tokens[0]
                    ni = state_of_edge.get((idx, 1), state_of_node[e.dst])
                    for k in range(K + 1):
                        edits, neg = row[k]
                        if edits >= INF[0]:
                            continue
                        entered = neg - e.score
                        relax(ni, k, (edits + 1, entered))  # path token deleted
                        if k < K:
                            cost = 0 if prefix[k] == tok else 1
                            relax(ni, k + 1, (edits + cost, entered))
            else:
                e = self.edges[ident]
                tok = e.tokens[consumed]
                ni = state_of_edge.get((ident, consumed + 1), state_of_node[e.dst])
                for k in range(K + 1):
                    edits, neg = row[k]
                    if edits >= INF[0]:
                        continue
                    relax(ni, k, (edits + 1, neg))
                    if k < K:
                        cost = 0 if prefix[k] == tok else 1
                        relax(ni, k + 1, (edits + cost, neg))

        # score components of the key are compared with a small tolerance:
        # mathematically tied totals can differ by an ulp when summed along
        # different routes, and a strict comparison would break ties wrongly
        def better(key: tuple[int, float, float], best: tuple[int, float, float]) -> bool:
            if key[0] != best[0]:
                return key[0] < best[0]
            if abs(key[1] - best[1]) > 1e-9:
                return key[1] < best[1]
            return key[2] < best[2] - 1e-9

        best_key = None
        best_state = -1
        for si in range(n_states):
            edits, neg = dp[si][K]
            if edits >= INF[0]:
                continue
            kind, ident, consumed = states[si]
            c = comp[ident] if kind == "node" else comp[self.edges[ident].dst]
            if c == NEG_INF:
                continue
            key = (edits, neg - c, neg)
            if best_key is None or better(key, best_key):
                best_key, best_state = key, si
        if best_key is None:
            raise ValueError("no completable match state found")

        kind, ident, consumed = states[best_state]
        if kind == "node":
            suffix = self._completion_tokens(ident, comp)
            completion = comp[ident]
        else:
            e = self.edges[ident]
            suffix = list(e.tokens[consumed:]) + self._completion_tokens(e.dst, comp)
            completion = comp[e.dst]
        return SuffixResult(tuple(suffix), best_key[0], -best_key[2], completion)

    # -- debug serialization ----------------------------------------------------

    def to_text(self) -> str:
        lines = [
            "wordgraph v1",
            f"start {self.start}",
            "finals " + " ".join(str(f) for f in sorted(self.finals)),
            f"nodes {self.n_nodes}",
            f"edges {len(self.edges)}",
        ]
        for e in self.edges:
            feats = " ".join(repr(f) for f in e.features)
            lines.append(
                f"{e.src} {e.dst} ||| {e.score!r} ||| {feats} ||| {' '.join(e.tokens)}"
            )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "WordGraph":
        lines = [l for l in text.splitlines() if l.strip()]
        if lines[0] != "wordgraph v1":
            raise ValueError("not a wordgraph v1 block")
        start = int(lines[1].split()[1])
        finals = [int(x) for x in lines[2].split()[1:]]
        n_nodes = int(lines[3].split()[1])
        edges = []
        for line in lines[5:]:
            head, score_s, feats_s, tokens_s = line.split(" ||| ")
            src, dst = (int(x) for x in head.split())
            feats = tuple(float(x) for x in feats_s.split()) if feats_s.strip() else ()
            tokens = tuple(tokens_s.split()) if tokens_s.strip() else ()
            edges.append(Edge(src, dst, tokens, feats, float(score_s)))
        return cls(n_nodes, edges, start, finals)


def graph_suffix(g: WordGraph, prefix: Sentence) -> Sentence:
    """Best word-level suffix completing the given prefix."""
    return g.suffix_search(prefix).suffix
