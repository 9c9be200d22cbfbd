"""Compositional queries over a built graph.

* :func:`related_entities` ranks entities co-occurring with a query entity
  (answer on one side, question reference on the other).
* :func:`enumerate_bridge_joins` finds two-hop chains ``q1 -> q2`` where the
  answer of ``q1`` is a question reference of ``q2``.
* :func:`frame_query` collects every question that mentions an entity as a
  reference, grouped by abstracted label.
* :func:`shared_answer_query` pairs distinct questions with the same answer
  entity.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Tuple

from .graph import QedbGraph, replace_reference
from .linker import is_year, jaccard_similarity, tokenize

ENTITY_MODE = "entity"
STRING_MODE = "string"


@dataclass(frozen=True)
class RelatedEntity:
    query_entity: str
    related_entity: str
    support: int
    example_question: str
    example_record: str = ""
    related_name: str = ""


def related_entities(
    graph: QedbGraph, e: str, k: int = 10, min_link_confidence: float = 0.25
) -> List[RelatedEntity]:
    """Rank entities ``e'`` by how many questions answer ``e`` and mention ``e'``.

    Both links must have confidence strictly above ``min_link_confidence``.
    Year-like entities and ``e`` itself are dropped before the top ``k`` are
    taken.  Each result carries the question of its smallest supporting
    record id.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    supporters: Dict[str, set] = {}
    for rid, conf in graph.edges_answering(e).items():
        if conf <= min_link_confidence:
            continue
        edge = graph.edge_by_record[rid]
        for i in range(edge.arity):
            for other, c in graph.reference_entities(rid, i).items():
                if c <= min_link_confidence or other == e:
                    continue
                if is_year(graph.entity_name(other)):
                    continue
                supporters.setdefault(other, set()).add(rid)
    ranked = sorted(supporters.items(), key=lambda kv: (-len(kv[1]), kv[0]))[:k]
    out = []
    for other, rids in ranked:
        example = min(rids)
        out.append(
            RelatedEntity(
                query_entity=e,
                related_entity=other,
                support=len(rids),
                example_question=graph.edge_by_record[example].question,
                example_record=example,
                related_name=graph.entity_name(other),
            )
        )
    return out


@dataclass(frozen=True)
class JoinConstraints:
    """Filters for bridge joins.  ``None`` disables a numeric limit.

    ``min_align_conf_q1``/``min_align_conf_q2`` override ``min_align_conf``
    for one side of the join.  Popularity of a bridge entity is the number
    of answers linked to it times the number of question references matched
    to it, counted over the whole graph.
    """

    single_ref_q2: bool = True
    single_answer: bool = True
    min_align_conf: Optional[float] = 2 / 3
    min_align_conf_q1: Optional[float] = None
    min_align_conf_q2: Optional[float] = None
    bridge_not_year: bool = True
    max_bridge_popularity: Optional[int] = 100_000
    q2_answer_not_in_q1: bool = True
    min_link_confidence: float = 0.0
    match_mode: str = ENTITY_MODE

    @property
    def q1_align(self) -> Optional[float]:
        return self.min_align_conf if self.min_align_conf_q1 is None else self.min_align_conf_q1

    @property
    def q2_align(self) -> Optional[float]:
        return self.min_align_conf if self.min_align_conf_q2 is None else self.min_align_conf_q2


@dataclass(frozen=True)
class BridgeJoin:
    q1: str
    q2: str
    bridge_entity: str
    bridge_ref_index: int
    rendered: Tuple[str, str]
    answer: str
    bridge_name: str = ""


def render_bridge(join: BridgeJoin) -> str:
    """Two-line QDMR-style text: ``q1`` verbatim, then ``q2`` with the bridge as ``$1``."""
    return "\n".join(join.rendered)


def _normalize(text: str) -> str:
    return " ".join(text.lower().split())


def bridge_popularity(graph: QedbGraph, entity_id: str) -> int:
    return len(graph.edges_answering(entity_id)) * len(graph.edges_referencing(entity_id))


def _bridge_candidates(graph: QedbGraph, c: JoinConstraints):
    """Yield ``(bridge, name, popularity, q1 ids, [(q2 id, ref index)])``."""
    if c.match_mode == ENTITY_MODE:
        answered: Dict[str, List[str]] = {}
        referenced: Dict[str, List[Tuple[str, int]]] = {}
        for eid in graph.entity_ids:
            a = graph.edges_answering(eid)
            r = graph.edges_referencing(eid)
            if a and r:
                answered[eid] = sorted(rid for rid, conf in a.items() if conf >= c.min_link_confidence)
                referenced[eid] = sorted(key for key, conf in r.items() if conf >= c.min_link_confidence)
        for eid in sorted(answered):
            yield eid, graph.entity_name(eid), bridge_popularity(graph, eid), answered[eid], referenced[eid]
    elif c.match_mode == STRING_MODE:
        answered_s: Dict[str, List[str]] = {}
        referenced_s: Dict[str, List[Tuple[str, int]]] = {}
        for edge in graph.edges:
            answered_s.setdefault(_normalize(graph.nodes[edge.target]), []).append(edge.record_id)
            for i, span in enumerate(edge.q_spans):
                referenced_s.setdefault(_normalize(span.text), []).append((edge.record_id, i))
        for key in sorted(set(answered_s) & set(referenced_s)):
            a, r = answered_s[key], referenced_s[key]
            yield key, key, len(a) * len(r), sorted(a), sorted(r)
    else:
        raise ValueError(f"unknown match_mode {c.match_mode!r}")


def enumerate_bridge_joins(
    graph: QedbGraph, constraints: Optional[JoinConstraints] = None
) -> Iterator[BridgeJoin]:
    """Yield every bridge join satisfying ``constraints``, ordered by (q1, q2).

    With the defaults: q2 has exactly one reference; each answer links to
    at most one entity; every alignment on both sides has confidence at
    least 2/3; the bridge is not a year and its popularity is at most
    100,000; and q2's answer does not occur in q1's text.
    """
    c = constraints or JoinConstraints()
    joins: List[BridgeJoin] = []
    for bridge, name, popularity, q1s, q2s in _bridge_candidates(graph, c):
        if c.bridge_not_year and is_year(name):
            continue
        if c.max_bridge_popularity is not None and popularity > c.max_bridge_popularity:
            continue
        left = [rid for rid in q1s if _q1_ok(graph, rid, c)]
        right = [(rid, i) for rid, i in q2s if _q2_ok(graph, rid, c)]
        for q1 in left:
            e1 = graph.edge_by_record[q1]
            q1_text = e1.question.lower()
            for q2, idx in right:
                if q1 == q2:
                    continue
                e2 = graph.edge_by_record[q2]
                answer = graph.nodes[e2.target]
                if c.q2_answer_not_in_q1 and answer.strip().lower() in q1_text:
                    continue
                joins.append(
                    BridgeJoin(
                        q1=q1,
                        q2=q2,
                        bridge_entity=bridge,
                        bridge_ref_index=idx,
                        rendered=(e1.question, replace_reference(e2.question, e2.q_spans, idx)),
                        answer=answer,
                        bridge_name=name,
                    )
                )
    joins.sort(key=lambda j: (j.q1, j.q2, j.bridge_ref_index, j.bridge_entity))
    yield from joins


def _q1_ok(graph: QedbGraph, rid: str, c: JoinConstraints) -> bool:
    edge = graph.edge_by_record[rid]
    if c.single_answer and c.match_mode == ENTITY_MODE and len(graph.answer_entities(rid)) > 1:
        return False
    if c.q1_align is not None and edge.min_align_confidence < c.q1_align:
        return False
    return True


def _q2_ok(graph: QedbGraph, rid: str, c: JoinConstraints) -> bool:
    edge = graph.edge_by_record[rid]
    if c.single_ref_q2 and edge.arity != 1:
        return False
    if c.single_answer and c.match_mode == ENTITY_MODE and len(graph.answer_entities(rid)) > 1:
        return False
    if c.q2_align is not None and edge.min_align_confidence < c.q2_align:
        return False
    return True


@dataclass(frozen=True)
class FrameEntry:
    answer: str
    record_id: str
    reference_index: int


@dataclass(frozen=True)
class FrameGroup:
    label: str
    entries: Tuple[FrameEntry, ...]


def frame_query(graph: QedbGraph, e: str, min_link_confidence: float = 0.0) -> List[FrameGroup]:
    """All questions using ``e`` as a question reference, grouped by label."""
    groups: Dict[str, Dict[str, FrameEntry]] = {}
    for (rid, idx), conf in sorted(graph.edges_referencing(e).items()):
        if conf < min_link_confidence:
            continue
        edge = graph.edge_by_record[rid]
        per_label = groups.setdefault(edge.label, {})
        if rid not in per_label:
            per_label[rid] = FrameEntry(graph.nodes[edge.target], rid, idx)
    return [
        FrameGroup(label, tuple(entries[r] for r in sorted(entries)))
        for label, entries in sorted(groups.items())
    ]


@dataclass(frozen=True)
class SharedAnswerPair:
    q1: str
    q2: str
    question1: str
    question2: str
    similarity: float


def shared_answer_query(
    graph: QedbGraph,
    e: str,
    distinctness_threshold: float = 0.8,
    min_link_confidence: float = 0.0,
) -> List[SharedAnswerPair]:
    """Pairs of different questions whose answers both link to ``e``.

    Two questions count as different when the Jaccard similarity of their
    tokens is below ``distinctness_threshold``.
    """
    if not 0.0 <= distinctness_threshold <= 1.0:
        raise ValueError("distinctness_threshold must be in [0, 1]")
    rids = sorted(rid for rid, conf in graph.edges_answering(e).items() if conf >= min_link_confidence)
    tokens = {rid: tokenize(graph.edge_by_record[rid].question) for rid in rids}
    out = []
    for a, b in combinations(rids, 2):
        sim = jaccard_similarity(tokens[a], tokens[b])
        if sim < distinctness_threshold:
            out.append(
                SharedAnswerPair(
                    a, b, graph.edge_by_record[a].question, graph.edge_by_record[b].question, sim
                )
            )
    return out


# -- line-delimited result rows -----------------------------------------------


def join_row(join: BridgeJoin) -> dict:
    return {
        "question_1": join.rendered[0],
        "bridge_entity": join.bridge_entity,
        "bridge_name": join.bridge_name,
        "question_2": join.rendered[1],
        "answer": join.answer,
        "q1": join.q1,
        "q2": join.q2,
        "bridge_ref_index": join.bridge_ref_index,
    }


def related_row(rel: RelatedEntity) -> dict:
    return {
        "query_entity": rel.query_entity,
        "related_entity": rel.related_entity,
        "related_name": rel.related_name,
        "support": rel.support,
        "example_question": rel.example_question,
        "example_record": rel.example_record,
    }


def frame_rows(groups: List[FrameGroup]) -> Iterator[dict]:
    for g in groups:
        for entry in g.entries:
            yield {"label": g.label, "answer": entry.answer, "record_id": entry.record_id}


def shared_answer_row(pair: SharedAnswerPair) -> dict:
    return {
        "q1": pair.q1,
        "q2": pair.q2,
        "question_1": pair.question1,
        "question_2": pair.question2,
        "similarity": pair.similarity,
    }
