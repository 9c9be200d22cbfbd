"""Parse and load the three line-delimited input files.

Each file holds one JSON object per line:

* passages: ``{"doc_id", "text", "title"?}``
* QA records: ``{"record_id", "doc_id", "question", "answer": span,
  "references": [{"q_span": span, "d_span": span, "align_confidence"?}],
  "question_entities"?: [[entity_id, ...], ...]}``
* entity links: ``{"doc_id", "mention": span, "entity_id",
  "canonical_name", "link_confidence"}``

where ``span`` is ``{"start", "end", "text"}`` with character offsets.
Blank lines are ignored.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Tuple, TypeVar, Union

from .model import EntityLink, Passage, QaRecord, ReferencePair, Span, validate_record

logger = logging.getLogger(__name__)

T = TypeVar("T")
PathLike = Union[str, Path]


class IngestError(ValueError):
    """A malformed or invalid input line, or a failed strict load."""

    def __init__(self, message: str, line: Optional[int] = None, source: Optional[str] = None):
        self.line = line
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"line {line}: "
        elif where:
            where += " "
        super().__init__(where + message)


# -- wire codecs ------------------------------------------------------------


def _require(obj: Dict[str, Any], key: str, kind: type) -> Any:
    if key not in obj:
        raise ValueError(f"missing field {key!r}")
    val = obj[key]
    if kind is float:
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise ValueError(f"field {key!r} must be a number")
        return float(val)
    if kind is int:
        if isinstance(val, bool) or not isinstance(val, int):
            raise ValueError(f"field {key!r} must be an integer")
        return val
    if not isinstance(val, kind):
        raise ValueError(f"field {key!r} must be {kind.__name__}")
    return val


def decode_span(obj: Any) -> Span:
    if not isinstance(obj, dict):
        raise ValueError("span must be an object")
    start = _require(obj, "start", int)
    end = _require(obj, "end", int)
    text = _require(obj, "text", str)
    return Span(start, end, text)


def encode_span(span: Span) -> Dict[str, Any]:
    return {"start": span.start, "end": span.end, "text": span.text}


def decode_passage(obj: Any) -> Passage:
    if not isinstance(obj, dict):
        raise ValueError("passage must be an object")
    title = obj.get("title")
    if title is not None and not isinstance(title, str):
        raise ValueError("field 'title' must be str")
    return Passage(_require(obj, "doc_id", str), _require(obj, "text", str), title)


def encode_passage(passage: Passage) -> Dict[str, Any]:
    out: Dict[str, Any] = {"doc_id": passage.doc_id, "text": passage.text}
    if passage.title is not None:
        out["title"] = passage.title
    return out


def decode_record(obj: Any) -> QaRecord:
    if not isinstance(obj, dict):
        raise ValueError("record must be an object")
    refs = []
    for r in obj.get("references") or []:
        if not isinstance(r, dict):
            raise ValueError("reference must be an object")
        conf = _require(r, "align_confidence", float) if "align_confidence" in r else 1.0
        refs.append(ReferencePair(decode_span(r.get("q_span")), decode_span(r.get("d_span")), conf))
    if "question_entities" in obj and obj["question_entities"] is not None:
        ents = obj["question_entities"]
        if not isinstance(ents, list) or not all(
            isinstance(es, list) and all(isinstance(e, str) for e in es) for es in ents
        ):
            raise ValueError("question_entities must be a list of lists of entity ids")
        qents = tuple(frozenset(es) for es in ents)
    else:
        qents = tuple(frozenset() for _ in refs)
    return QaRecord(
        record_id=_require(obj, "record_id", str),
        question=_require(obj, "question", str),
        doc_id=_require(obj, "doc_id", str),
        answer=decode_span(obj.get("answer")),
        references=tuple(refs),
        question_entities=qents,
    )


def encode_record(record: QaRecord) -> Dict[str, Any]:
    return {
        "record_id": record.record_id,
        "doc_id": record.doc_id,
        "question": record.question,
        "answer": encode_span(record.answer),
        "references": [
            {
                "q_span": encode_span(r.q_span),
                "d_span": encode_span(r.d_span),
                "align_confidence": r.align_confidence,
            }
            for r in record.references
        ],
        "question_entities": [sorted(es) for es in record.question_entities],
    }


def decode_link(obj: Any) -> EntityLink:
    if not isinstance(obj, dict):
        raise ValueError("link must be an object")
    return EntityLink(
        doc_id=_require(obj, "doc_id", str),
        mention=decode_span(obj.get("mention")),
        entity_id=_require(obj, "entity_id", str),
        canonical_name=_require(obj, "canonical_name", str),
        link_confidence=_require(obj, "link_confidence", float),
    )


def encode_link(link: EntityLink) -> Dict[str, Any]:
    return {
        "doc_id": link.doc_id,
        "mention": encode_span(link.mention),
        "entity_id": link.entity_id,
        "canonical_name": link.canonical_name,
        "link_confidence": link.link_confidence,
    }


def dumps(obj: Dict[str, Any]) -> str:
    """Canonical one-line JSON used for every line-delimited output."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


# -- line parsing -------------------------------------------------------------


def _iter_decoded(
    lines: Iterable[str], decode: Callable[[Any], T]
) -> Iterator[Tuple[int, Optional[T], Optional[str]]]:
    """Yield ``(line_no, item, error)`` for every non-blank line."""
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            item = decode(json.loads(line))
        except (ValueError, TypeError) as exc:
            yield line_no, None, str(exc)
        else:
            yield line_no, item, None


def parse_passages(lines: Iterable[str], source: Optional[str] = None) -> List[Passage]:
    out: List[Passage] = []
    seen: Dict[str, int] = {}
    for line_no, passage, err in _iter_decoded(lines, decode_passage):
        if err is not None:
            raise IngestError(err, line_no, source)
        assert passage is not None
        if passage.doc_id in seen:
            raise IngestError(
                f"duplicate doc_id {passage.doc_id!r} (first seen on line {seen[passage.doc_id]})",
                line_no,
                source,
            )
        seen[passage.doc_id] = line_no
        out.append(passage)
    return out


def parse_qa_records(lines: Iterable[str], source: Optional[str] = None) -> List[QaRecord]:
    out = []
    for line_no, record, err in _iter_decoded(lines, decode_record):
        if err is not None:
            raise IngestError(err, line_no, source)
        out.append(record)
    return out


def parse_links(lines: Iterable[str], source: Optional[str] = None) -> List[EntityLink]:
    out = []
    for line_no, link, err in _iter_decoded(lines, decode_link):
        if err is not None:
            raise IngestError(err, line_no, source)
        out.append(link)
    return out


# -- corpus -------------------------------------------------------------------


@dataclass(frozen=True)
class IngestStats:
    records_accepted: int = 0
    records_rejected: int = 0
    links_accepted: int = 0
    links_rejected: int = 0
    links_out_of_bounds: int = 0


@dataclass(frozen=True)
class Problem:
    source: str
    line: int
    message: str

    def __str__(self):
        return f"{self.source}:line {self.line}: {self.message}"


@dataclass(frozen=True)
class Corpus:
    passages: Dict[str, Passage]
    records: Tuple[QaRecord, ...]
    links: Tuple[EntityLink, ...]
    stats: IngestStats = IngestStats()
    problems: Tuple[Problem, ...] = field(default=(), compare=False)

    def links_by_doc(self) -> Dict[str, List[EntityLink]]:
        out: Dict[str, List[EntityLink]] = {}
        for link in self.links:
            out.setdefault(link.doc_id, []).append(link)
        return out


def corpus_from_items(
    passages: Iterable[Passage],
    records: Iterable[QaRecord],
    links: Iterable[EntityLink] = (),
    strict: bool = True,
) -> Corpus:
    """Validate already-decoded items and assemble a :class:`Corpus`."""
    return _assemble(
        list(passages),
        [(i, r, None) for i, r in enumerate(records, start=1)],
        [(i, lk, None) for i, lk in enumerate(links, start=1)],
        strict,
        "<records>",
        "<links>",
    )


def _assemble(passages, record_rows, link_rows, strict, records_src, links_src) -> Corpus:
    by_id: Dict[str, Passage] = {}
    for p in passages:
        if p.doc_id in by_id:
            raise IngestError(f"duplicate doc_id {p.doc_id!r}")
        by_id[p.doc_id] = p

    problems: List[Problem] = []

    def reject(src, line_no, msg):
        if strict:
            raise IngestError(msg, line_no, src)
        problems.append(Problem(src, line_no, msg))

    records: List[QaRecord] = []
    rec_rejected = 0
    seen_ids = set()
    for line_no, rec, err in record_rows:
        if err is None:
            if rec.doc_id not in by_id:
                err = f"unknown doc_id {rec.doc_id!r}"
            elif rec.record_id in seen_ids:
                err = f"duplicate record_id {rec.record_id!r}"
            else:
                violations = validate_record(rec, by_id[rec.doc_id])
                if violations:
                    err = "; ".join(str(v) for v in violations)
        if err is not None:
            rec_rejected += 1
            reject(records_src, line_no, err)
            continue
        seen_ids.add(rec.record_id)
        records.append(rec)

    links: List[EntityLink] = []
    link_rejected = 0
    out_of_bounds = 0
    for line_no, link, err in link_rows:
        if err is None:
            passage = by_id.get(link.doc_id)
            if passage is None:
                err = f"unknown doc_id {link.doc_id!r}"
            elif link.mention.end > len(passage.text):
                # dropped in both modes
                out_of_bounds += 1
                link_rejected += 1
                problems.append(Problem(links_src, line_no, "mention outside passage bounds"))
                continue
            elif not link.mention.matches(passage.text):
                err = f"mention text {link.mention.text!r} does not match passage"
            elif not 0.0 <= link.link_confidence <= 1.0:
                err = f"link_confidence {link.link_confidence} not in [0, 1]"
        if err is not None:
            link_rejected += 1
            reject(links_src, line_no, err)
            continue
        links.append(link)

    if problems:
        logger.warning("ingest dropped %d item(s)", len(problems))
    return Corpus(
        passages=by_id,
        records=tuple(records),
        links=tuple(links),
        stats=IngestStats(len(records), rec_rejected, len(links), link_rejected, out_of_bounds),
        problems=tuple(problems),
    )


def _read_lines(path: PathLike) -> List[str]:
    with open(path, encoding="utf-8") as f:
        return f.read().splitlines()


def load_corpus(
    passages_path: PathLike,
    records_path: PathLike,
    links_path: Optional[PathLike] = None,
    strictness: str = "strict",
) -> Corpus:
    """Load and validate the three input files.

    ``strictness="strict"`` raises :class:`IngestError` on the first bad
    record or link; ``"lenient"`` drops it and counts it in ``stats``.
    Links whose mention falls outside the passage are dropped in both modes.
    Passage-file problems are fatal in both modes.
    """
    if strictness not in ("strict", "lenient"):
        raise ValueError(f"strictness must be 'strict' or 'lenient', got {strictness!r}")
    strict = strictness == "strict"

    passages = parse_passages(_read_lines(passages_path), source=str(passages_path))
    record_rows = list(_iter_decoded(_read_lines(records_path), decode_record))
    link_rows = list(_iter_decoded(_read_lines(links_path), decode_link)) if links_path else []
    return _assemble(
        passages, record_rows, link_rows, strict, str(records_path), str(links_path or "<links>")
    )


def write_jsonl(path: PathLike, rows: Iterable[Dict[str, Any]]):
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            f.write(dumps(row) + "\n")
