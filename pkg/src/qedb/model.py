"""Core record types for a question-answer explanation database.

Every type here is a frozen dataclass, so records can be shared freely
between workers once constructed.  Offsets are character offsets into the
containing string (a question or a passage), end-exclusive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Tuple


@dataclass(frozen=True, order=True)
class Span:
    start: int
    end: int
    text: str

    def __post_init__(self):
        if self.start < 0:
            raise ValueError(f"span start must be >= 0, got {self.start}")
        if self.start >= self.end:
            raise ValueError(f"span start must be < end, got [{self.start}, {self.end})")

    def overlaps(self, other: "Span") -> bool:
        return self.start < other.end and other.start < self.end

    def contains(self, other: "Span") -> bool:
        return self.start <= other.start and other.end <= self.end

    def matches(self, host: str) -> bool:
        """True if ``text`` is exactly ``host[start:end]``."""
        return self.end <= len(host) and host[self.start:self.end] == self.text


@dataclass(frozen=True)
class ReferencePair:
    q_span: Span
    d_span: Span
    align_confidence: float = 1.0


@dataclass(frozen=True)
class QaRecord:
    """One generated question with its answer span and question explanation.

    ``references`` pairs each question reference with the passage span it
    denotes.  ``question_entities[i]`` is the set of entity ids supplied
    upstream for reference ``i`` (usually empty; the linker fills the gap).
    """

    record_id: str
    question: str
    doc_id: str
    answer: Span
    references: Tuple[ReferencePair, ...] = ()
    question_entities: Tuple[FrozenSet[str], ...] = ()

    def __post_init__(self):
        # an empty tuple means "nothing supplied" for every reference
        if not self.question_entities and self.references:
            object.__setattr__(self, "question_entities", tuple(frozenset() for _ in self.references))

    @property
    def arity(self) -> int:
        return len(self.references)

    @property
    def min_align_confidence(self) -> float:
        if not self.references:
            return 1.0
        return min(r.align_confidence for r in self.references)


@dataclass(frozen=True)
class EntityLink:
    doc_id: str
    mention: Span
    entity_id: str
    canonical_name: str
    link_confidence: float


@dataclass(frozen=True)
class Passage:
    doc_id: str
    text: str
    title: Optional[str] = None


@dataclass(frozen=True)
class Violation:
    where: str
    message: str

    def __str__(self):
        return f"{self.where}: {self.message}"


def _check_span(span: Span, host: str, where: str, out: List[Violation]):
    if span.end > len(host):
        out.append(Violation(where, f"span [{span.start}, {span.end}) exceeds host length {len(host)}"))
    elif host[span.start:span.end] != span.text:
        out.append(
            Violation(
                where,
                f"span text {span.text!r} != host substring {host[span.start:span.end]!r}",
            )
        )


def validate_record(record: QaRecord, passage: Passage) -> List[Violation]:
    """Check a record against its source passage.

    Returns an empty list when every span matches its host string and the
    record invariants hold.  Never raises: problems are reported as data.
    """
    out: List[Violation] = []
    if record.doc_id != passage.doc_id:
        out.append(Violation("doc_id", f"record doc_id {record.doc_id!r} != passage {passage.doc_id!r}"))

    _check_span(record.answer, passage.text, "answer", out)

    prev: Optional[Span] = None
    for i, ref in enumerate(record.references):
        _check_span(ref.q_span, record.question, f"references[{i}].q_span", out)
        _check_span(ref.d_span, passage.text, f"references[{i}].d_span", out)
        if not 0.0 <= ref.align_confidence <= 1.0:
            out.append(
                Violation(f"references[{i}].align_confidence", f"{ref.align_confidence} not in [0, 1]")
            )
        if prev is not None:
            if ref.q_span.start < prev.start:
                out.append(Violation(f"references[{i}].q_span", "references not ordered by question offset"))
            elif ref.q_span.overlaps(prev):
                out.append(Violation(f"references[{i}].q_span", "overlaps previous question reference"))
        prev = ref.q_span
        if ref.d_span.overlaps(record.answer):
            out.append(Violation(f"references[{i}].d_span", "passage reference overlaps the answer span"))

    if len(record.question_entities) != len(record.references):
        out.append(
            Violation(
                "question_entities",
                f"arity {len(record.question_entities)} != {len(record.references)} references",
            )
        )
    return out
