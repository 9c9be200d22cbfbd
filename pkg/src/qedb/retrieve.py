"""One-hop question answering by question similarity, plus span metrics.

The shipped retriever is Okapi BM25 over the stored question texts.  Any
object with a ``search(query, top_k)`` method returning ``(record_id,
score)`` pairs can stand in for it (see :class:`Retriever`).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Protocol, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from .graph import QedbGraph
from .linker import tokenize
from .model import QaRecord


class Retriever(Protocol):
    def search(self, query: str, top_k: int = 10) -> List[Tuple[str, float]]:
        ...


def bm25_idf(n_docs: int, doc_freq: int) -> float:
    # +1 inside the log keeps idf positive even for terms in every document
    return math.log(1.0 + (n_docs - doc_freq + 0.5) / (doc_freq + 0.5))


@dataclass
class Bm25Index:
    postings: Dict[str, List[Tuple[str, int]]]
    doc_lengths: Dict[str, int]
    avg_length: float
    k1: float = 1.2
    b: float = 0.75

    @property
    def n_docs(self) -> int:
        return len(self.doc_lengths)

    def idf(self, token: str) -> float:
        return bm25_idf(self.n_docs, len(self.postings.get(token, ())))

    def score_all(self, query: str) -> Dict[str, float]:
        """Scores of every record sharing at least one token with ``query``."""
        scores: Dict[str, float] = {}
        for token in tokenize(query):
            plist = self.postings.get(token)
            if not plist:
                continue
            idf = self.idf(token)
            for rid, tf in plist:
                norm = self.k1 * (1.0 - self.b + self.b * self.doc_lengths[rid] / self.avg_length)
                scores[rid] = scores.get(rid, 0.0) + idf * tf * (self.k1 + 1.0) / (tf + norm)
        return scores

    def search(self, query: str, top_k: int = 10) -> List[Tuple[str, float]]:
        if top_k < 1:
            raise ValueError("top_k must be >= 1")
        ranked = sorted(self.score_all(query).items(), key=lambda kv: (-kv[1], kv[0]))
        return ranked[:top_k]


def build_index(records: Iterable[QaRecord], k1: float = 1.2, b: float = 0.75) -> Bm25Index:
    """Index question texts with the linker's tokenizer."""
    if k1 <= 0:
        raise ValueError("k1 must be > 0")
    if not 0.0 <= b <= 1.0:
        raise ValueError("b must be in [0, 1]")
    return _index_texts(((r.record_id, r.question) for r in records), k1, b)


def index_graph(graph: QedbGraph, k1: float = 1.2, b: float = 0.75) -> Bm25Index:
    return _index_texts(((e.record_id, e.question) for e in graph.edges), k1, b)


def _index_texts(items: Iterable[Tuple[str, str]], k1: float, b: float) -> Bm25Index:
    postings: Dict[str, List[Tuple[str, int]]] = {}
    lengths: Dict[str, int] = {}
    for rid, text in sorted(items):
        tokens = tokenize(text)
        lengths[rid] = len(tokens)
        for tok, tf in sorted(Counter(tokens).items()):
            postings.setdefault(tok, []).append((rid, tf))
    avg = sum(lengths.values()) / len(lengths) if lengths else 0.0
    return Bm25Index(postings, lengths, avg or 1.0, k1, b)


def retrieve_similar(index: Retriever, query: str, top_k: int = 10) -> List[Tuple[str, float]]:
    return index.search(query, top_k)


@dataclass(frozen=True)
class OneHopAnswer:
    answer: str
    question: str
    record_id: str
    score: float


def answer_one_hop(graph: QedbGraph, index: Retriever, query: str, top_k: int = 10) -> List[OneHopAnswer]:
    """Answers of the most similar stored questions, one row per distinct answer.

    Answers are merged on normalized text, keeping the best-scoring
    supporting question.
    """
    best: Dict[str, OneHopAnswer] = {}
    for rid, score in index.search(query, top_k):
        edge = graph.edge_by_record.get(rid)
        if edge is None:
            continue
        answer = graph.nodes[edge.target]
        key = normalize_answer(answer)
        if key not in best or score > best[key].score:
            best[key] = OneHopAnswer(answer, edge.question, rid, score)
    return sorted(best.values(), key=lambda a: (-a.score, a.record_id))


def normalize_answer(text: str) -> str:
    return " ".join(text.lower().split())


# -- metrics -------------------------------------------------------------------


def token_f1(predicted: str, gold: str) -> float:
    p, g = tokenize(predicted), tokenize(gold)
    if not p and not g:
        return 1.0
    common = sum((Counter(p) & Counter(g)).values())
    if common == 0:
        return 0.0
    precision = common / len(p)
    recall = common / len(g)
    return 2 * precision * recall / (precision + recall)


def em_f1(predicted: Sequence[str], gold: Sequence[str]) -> Tuple[int, float]:
    """Exact match and F1 between two lists of span texts.

    EM is 1 when the multisets of normalized texts agree.  F1 pairs the spans
    one-to-one so the summed token F1 is maximal, then divides by the longer
    list's length; unmatched spans count as 0.
    """
    p = [normalize_answer(s) for s in predicted]
    g = [normalize_answer(s) for s in gold]
    em = int(Counter(p) == Counter(g))
    if not p and not g:
        return em, 1.0
    if not p or not g:
        return em, 0.0
    scores = np.array([[token_f1(a, b) for b in g] for a in p])
    rows, cols = linear_sum_assignment(scores, maximize=True)
    return em, float(scores[rows, cols].sum()) / max(len(p), len(g))


def answers_match(a: str, b: str) -> bool:
    return normalize_answer(a) == normalize_answer(b)


def top1_accuracy(index: Retriever, graph: QedbGraph, probes: Iterable[Tuple[str, str]]) -> float:
    """Share of ``(question, answer)`` probes whose top retrieved question has the same answer."""
    hits = total = 0
    for question, answer in probes:
        total += 1
        top = index.search(question, 1)
        if top and answers_match(graph.answer_text(top[0][0]), answer):
            hits += 1
    return hits / total if total else 0.0
