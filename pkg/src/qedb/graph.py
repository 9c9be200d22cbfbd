"""The QEDB graph: span and entity nodes, question hyperedges, mention edges.

Each QA record becomes one directed hyperedge from its passage-reference
span nodes to its answer span node, labelled with the abstracted question
(references replaced by ``$1 .. $k``).  Span nodes are keyed by
``(doc_id, start, end)``, so an answer span of one question and a reference
span of another coincide when their offsets do.  Entities are separate nodes
attached to spans through mention edges, which keeps cross-document
coreference explicit and reversible.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .ingest import Corpus
from .linker import ReferenceEntityMatch
from .model import QaRecord, Span

SPAN = "span"
ENTITY = "entity"

# mention sources
LINK = "link"          # entity link whose mention lies inside the span
MATCH = "match"        # linker match of a question reference
SUPPLIED = "supplied"  # entity set carried on the input record


@dataclass(frozen=True, order=True)
class NodeId:
    kind: str
    doc_id: str = ""
    start: int = -1
    end: int = -1
    entity_id: str = ""

    @classmethod
    def span(cls, doc_id: str, span: Span) -> "NodeId":
        return cls(SPAN, doc_id, span.start, span.end)

    @classmethod
    def entity(cls, entity_id: str) -> "NodeId":
        return cls(ENTITY, entity_id=entity_id)


@dataclass(frozen=True)
class QuestionEdge:
    record_id: str
    label: str
    question: str
    sources: Tuple[NodeId, ...]
    target: NodeId
    q_spans: Tuple[Span, ...]
    min_align_confidence: float

    @property
    def arity(self) -> int:
        return len(self.sources)


@dataclass(frozen=True, order=True)
class Mention:
    """An entity attached to a span node.

    ``record_id``/``reference_index`` are set for reference-level mentions
    (``match`` and ``supplied``); link mentions are span-level.
    """

    entity_id: str
    target: NodeId
    source: str
    confidence: float
    record_id: str = ""
    reference_index: int = -1
    similarity: float = 1.0


class QedbGraph:
    """Immutable graph plus lookup indexes derived from edges and mentions."""

    def __init__(
        self,
        nodes: Dict[NodeId, str],
        edges: Iterable[QuestionEdge],
        mentions: Iterable[Mention],
    ):
        self.nodes: Dict[NodeId, str] = dict(sorted(nodes.items()))
        self.edges: Tuple[QuestionEdge, ...] = tuple(sorted(edges, key=lambda e: e.record_id))
        self.mentions: Tuple[Mention, ...] = tuple(sorted(set(mentions)))
        self._build_indexes()

    def _build_indexes(self):
        self.edge_by_record: Dict[str, QuestionEdge] = {}
        self.by_label: Dict[str, List[str]] = {}
        self._answer_edges: Dict[NodeId, List[str]] = {}
        for edge in self.edges:
            if edge.record_id in self.edge_by_record:
                raise ValueError(f"duplicate edge for record {edge.record_id!r}")
            for n in (*edge.sources, edge.target):
                if n not in self.nodes:
                    raise ValueError(f"edge {edge.record_id!r} endpoint {n} not in nodes")
            self.edge_by_record[edge.record_id] = edge
            self.by_label.setdefault(edge.label, []).append(edge.record_id)
            self._answer_edges.setdefault(edge.target, []).append(edge.record_id)

        # entity -> {record_id: confidence} / {(record_id, ref): confidence}
        self._answer_entities: Dict[str, Dict[str, float]] = {}
        self._reference_entities: Dict[str, Dict[Tuple[str, int], float]] = {}
        self._span_links: Dict[NodeId, Dict[str, float]] = {}
        self._ref_mentions: Dict[Tuple[str, int], List[Mention]] = {}
        for m in self.mentions:
            if m.target not in self.nodes or NodeId.entity(m.entity_id) not in self.nodes:
                raise ValueError(f"mention endpoint missing from nodes: {m}")
            if m.source == LINK:
                per = self._span_links.setdefault(m.target, {})
                per[m.entity_id] = max(per.get(m.entity_id, 0.0), m.confidence)
            else:
                edge = self.edge_by_record.get(m.record_id)
                if edge is None or not 0 <= m.reference_index < edge.arity:
                    raise ValueError(f"mention refers to unknown reference: {m}")
                per = self._reference_entities.setdefault(m.entity_id, {})
                key = (m.record_id, m.reference_index)
                per[key] = max(per.get(key, 0.0), m.confidence)
                self._ref_mentions.setdefault(key, []).append(m)
        for node, ents in self._span_links.items():
            for rid in self._answer_edges.get(node, ()):
                for eid, conf in ents.items():
                    self._answer_entities.setdefault(eid, {})[rid] = conf

    # -- equality ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, QedbGraph):
            return NotImplemented
        return (self.nodes, self.edges, self.mentions) == (other.nodes, other.edges, other.mentions)

    def __repr__(self):
        return f"QedbGraph(nodes={len(self.nodes)}, edges={len(self.edges)}, mentions={len(self.mentions)})"

    # -- lookups ----------------------------------------------------------

    @property
    def entity_ids(self) -> List[str]:
        return [n.entity_id for n in self.nodes if n.kind == ENTITY]

    def entity_name(self, entity_id: str) -> str:
        return self.nodes.get(NodeId.entity(entity_id), entity_id)

    def answer_text(self, record_id: str) -> str:
        return self.nodes[self.edge_by_record[record_id].target]

    def answer_entities(self, record_id: str) -> Dict[str, float]:
        """Entities linked inside the answer span of a record, with confidence."""
        target = self.edge_by_record[record_id].target
        return dict(self._span_links.get(target, {}))

    def reference_entities(self, record_id: str, index: int) -> Dict[str, float]:
        out = {}
        for m in self.mentions_for_reference(record_id, index):
            out[m.entity_id] = max(out.get(m.entity_id, 0.0), m.confidence)
        return out

    def mentions_for_reference(self, record_id: str, index: int) -> List[Mention]:
        return list(self._ref_mentions.get((record_id, index), ()))

    def edges_answering(self, entity_id: str) -> Dict[str, float]:
        """record_id -> link confidence, for edges whose answer links to the entity."""
        return dict(self._answer_entities.get(entity_id, {}))

    def edges_referencing(self, entity_id: str) -> Dict[Tuple[str, int], float]:
        """(record_id, reference index) -> confidence, for references matched to the entity."""
        return dict(self._reference_entities.get(entity_id, {}))

    def edges_with_label(self, label: str) -> List[QuestionEdge]:
        return [self.edge_by_record[r] for r in self.by_label.get(label, ())]


def abstract_question(record: QaRecord) -> str:
    """Replace each question reference with ``$i`` (by question offset).

    >>> from qedb.model import ReferencePair
    >>> q = "what is the tv series tipping the velvet based on"
    >>> ref = ReferencePair(Span(8, 40, q[8:40]), Span(0, 18, "Tipping the Velvet"))
    >>> abstract_question(QaRecord("r", q, "d", Span(0, 1, "x"), (ref,)))
    'what is $1 based on'
    """
    return _substitute(record.question, [r.q_span for r in record.references])


def _substitute(question: str, spans: Sequence[Span], only: Optional[int] = None) -> str:
    order = sorted(range(len(spans)), key=lambda i: spans[i].start)
    pieces = []
    pos = 0
    for rank, i in enumerate(order, start=1):
        s = spans[i]
        if s.start < pos:
            raise ValueError(f"overlapping question references at offset {s.start}")
        pieces.append(question[pos:s.start])
        if only is None:
            pieces.append(f"${rank}")
        elif i == only:
            pieces.append("$1")
        else:
            pieces.append(question[s.start:s.end])
        pos = s.end
    pieces.append(question[pos:])
    if not spans:
        return question
    return " ".join("".join(pieces).split())


def replace_reference(question: str, spans: Sequence[Span], index: int) -> str:
    """Replace only reference ``index`` with ``$1``; the rest stays verbatim."""
    return _substitute(question, spans, only=index)


@dataclass(frozen=True)
class GraphConfig:
    min_link_confidence: float = 0.25


def build_graph(
    corpus: Corpus,
    matches: Iterable[ReferenceEntityMatch] = (),
    config=None,
) -> QedbGraph:
    """Build the graph for a validated corpus and its reference matches.

    ``config`` may be any object with a ``min_link_confidence`` attribute;
    links below it contribute neither entity nodes nor mention edges.
    """
    threshold = (config or GraphConfig()).min_link_confidence
    nodes: Dict[NodeId, str] = {}
    edges: List[QuestionEdge] = []
    spans_by_doc: Dict[str, Dict[NodeId, Span]] = {}

    records = sorted(corpus.records, key=lambda r: r.record_id)
    for rec in records:
        doc_spans = spans_by_doc.setdefault(rec.doc_id, {})
        target = NodeId.span(rec.doc_id, rec.answer)
        nodes[target] = rec.answer.text
        doc_spans[target] = rec.answer
        sources = []
        for ref in rec.references:
            nid = NodeId.span(rec.doc_id, ref.d_span)
            nodes[nid] = ref.d_span.text
            doc_spans[nid] = ref.d_span
            sources.append(nid)
        edges.append(
            QuestionEdge(
                record_id=rec.record_id,
                label=abstract_question(rec),
                question=rec.question,
                sources=tuple(sources),
                target=target,
                q_spans=tuple(r.q_span for r in rec.references),
                min_align_confidence=rec.min_align_confidence,
            )
        )

    # canonical name: the highest-confidence link wins, then the smaller name
    names: Dict[str, Tuple[float, str]] = {}
    link_mentions: Dict[Tuple[str, NodeId], float] = {}
    for link in corpus.links:
        if link.link_confidence < threshold:
            continue
        prev = names.get(link.entity_id)
        cand = (-link.link_confidence, link.canonical_name)
        if prev is None or cand < prev:
            names[link.entity_id] = cand
        for nid, span in spans_by_doc.get(link.doc_id, {}).items():
            if span.contains(link.mention):
                key = (link.entity_id, nid)
                link_mentions[key] = max(link_mentions.get(key, 0.0), link.link_confidence)

    mentions = [Mention(eid, nid, LINK, conf) for (eid, nid), conf in link_mentions.items()]

    by_record = {e.record_id: e for e in edges}
    for m in matches:
        edge = by_record.get(m.record_id)
        if edge is None or not 0 <= m.reference_index < edge.arity:
            raise ValueError(f"match does not belong to this corpus: {m}")
        if m.link_confidence < threshold or m.entity_id not in names:
            continue
        mentions.append(
            Mention(
                m.entity_id,
                edge.sources[m.reference_index],
                MATCH,
                m.link_confidence,
                m.record_id,
                m.reference_index,
                m.similarity,
            )
        )

    for rec in records:
        edge = by_record[rec.record_id]
        for i, ents in enumerate(rec.question_entities[: rec.arity]):
            for eid in ents:
                names.setdefault(eid, (-1.0, eid))
                mentions.append(Mention(eid, edge.sources[i], SUPPLIED, 1.0, rec.record_id, i))

    for eid, (_, name) in names.items():
        nodes[NodeId.entity(eid)] = name
    return QedbGraph(nodes, edges, mentions)


@dataclass(frozen=True)
class GraphStats:
    span_nodes: int = 0
    entity_nodes: int = 0
    edges: int = 0
    mentions: int = 0
    references: int = 0
    arity_histogram: Dict[int, int] = field(default_factory=dict)
    distinct_labels: int = 0
    question_linkable_fraction: float = 0.0
    answer_linkable_fraction: float = 0.0
    both_linkable_fraction: float = 0.0
    reference_linkable_fraction: float = 0.0

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["arity_histogram"] = {str(k): v for k, v in sorted(self.arity_histogram.items())}
        return d


def graph_stats(graph: QedbGraph) -> GraphStats:
    """Counts plus entity coverage.

    ``question_linkable_fraction`` is the share of edges with at least one
    reference matched to an entity; ``answer_linkable_fraction`` the share
    whose answer span contains a linked entity; ``both_linkable_fraction``
    the share with both.
    """
    n_edges = len(graph.edges)
    if n_edges == 0:
        return GraphStats(
            span_nodes=sum(1 for n in graph.nodes if n.kind == SPAN),
            entity_nodes=sum(1 for n in graph.nodes if n.kind == ENTITY),
            mentions=len(graph.mentions),
        )
    linked_refs = {(m.record_id, m.reference_index) for m in graph.mentions if m.source != LINK}
    q_link = a_link = both = 0
    for e in graph.edges:
        q = any((e.record_id, i) in linked_refs for i in range(e.arity))
        a = bool(graph.answer_entities(e.record_id))
        q_link += q
        a_link += a
        both += q and a
    n_refs = sum(e.arity for e in graph.edges)
    return GraphStats(
        span_nodes=sum(1 for n in graph.nodes if n.kind == SPAN),
        entity_nodes=sum(1 for n in graph.nodes if n.kind == ENTITY),
        edges=n_edges,
        mentions=len(graph.mentions),
        references=n_refs,
        arity_histogram=dict(sorted(Counter(e.arity for e in graph.edges).items())),
        distinct_labels=len(graph.by_label),
        question_linkable_fraction=q_link / n_edges,
        answer_linkable_fraction=a_link / n_edges,
        both_linkable_fraction=both / n_edges,
        reference_linkable_fraction=len(linked_refs) / n_refs if n_refs else 0.0,
    )
