"""Attach linked passage entities to question references.

The passage is entity-linked upstream; questions are not.  A question
reference is associated with the linked entity whose surface form or
canonical name is most similar to it under token-level Jaccard.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Union

from .model import EntityLink, QaRecord

_TOKEN_RE = re.compile(r"[^\W_]+")
_YEAR_RE = re.compile(r"\d{3,4}")

SURFACE_FORM = "surface_form"
CANONICAL_NAME = "canonical_name"


def tokenize(text: str) -> List[str]:
    """Lowercase and split on whitespace and punctuation.

    >>> tokenize("Tipping the Velvet")
    ['tipping', 'the', 'velvet']
    >>> tokenize("lucretius's book")
    ['lucretius', 's', 'book']
    """
    return _TOKEN_RE.findall(text.lower())


def jaccard_similarity(a: Iterable[str], b: Iterable[str]) -> float:
    sa, sb = set(a), set(b)
    if not sa and not sb:
        return 1.0
    return len(sa & sb) / len(sa | sb)


def is_year(entity_or_text: Union[str, EntityLink]) -> bool:
    text = entity_or_text.canonical_name if isinstance(entity_or_text, EntityLink) else entity_or_text
    text = text.strip()
    return bool(_YEAR_RE.fullmatch(text)) and 1000 <= int(text) <= 2999


@dataclass(frozen=True)
class ReferenceEntityMatch:
    record_id: str
    reference_index: int
    entity_id: str
    similarity: float
    via: str
    link_confidence: float = 1.0


def _link_similarity(ref_tokens: Sequence[str], link: EntityLink):
    surface = jaccard_similarity(ref_tokens, tokenize(link.mention.text))
    canonical = jaccard_similarity(ref_tokens, tokenize(link.canonical_name))
    if canonical > surface:
        return canonical, CANONICAL_NAME
    return surface, SURFACE_FORM


def match_entities_to_references(
    record: QaRecord,
    passage_links: Sequence[EntityLink],
    min_link_confidence: float = 0.25,
    min_match_similarity: float = 0.0,
) -> List[ReferenceEntityMatch]:
    """Pick, for each question reference, the most similar linked entity.

    An entity is scored by the better of its passage surface form and its
    canonical name.  Links below ``min_link_confidence`` are ignored.  Ties
    go to the higher link confidence, then the smaller entity id.  A
    reference whose best similarity is 0 (or below
    ``min_match_similarity``) gets no match.
    """
    candidates = [lk for lk in passage_links if lk.link_confidence >= min_link_confidence]
    if not candidates:
        return []
    out = []
    for i, ref in enumerate(record.references):
        ref_tokens = tokenize(ref.q_span.text)
        # entity_id -> (similarity, via, link confidence)
        best_per_entity: Dict[str, tuple] = {}
        for link in candidates:
            sim, via = _link_similarity(ref_tokens, link)
            prev = best_per_entity.get(link.entity_id)
            if prev is None or (sim, link.link_confidence) > (prev[0], prev[2]):
                best_per_entity[link.entity_id] = (sim, via, link.link_confidence)
        entity_id, (sim, via, conf) = min(
            best_per_entity.items(), key=lambda kv: (-kv[1][0], -kv[1][2], kv[0])
        )
        if sim <= 0.0 or sim < min_match_similarity:
            continue
        out.append(ReferenceEntityMatch(record.record_id, i, entity_id, sim, via, conf))
    return out


def match_corpus(
    records: Iterable[QaRecord],
    links_by_doc: Dict[str, Sequence[EntityLink]],
    min_link_confidence: float = 0.25,
    min_match_similarity: float = 0.0,
) -> List[ReferenceEntityMatch]:
    out: List[ReferenceEntityMatch] = []
    for record in records:
        out.extend(
            match_entities_to_references(
                record, links_by_doc.get(record.doc_id, ()), min_link_confidence, min_match_similarity
            )
        )
    return out
