"""On-disk store and line-delimited export for :class:`QedbGraph`.

A store is a directory::

    header.json     {"format": "qedb-store", "version": 1,
                     "files": {name: sha256}, "counts": {...}}
    nodes.jsonl     one node per line
    edges.jsonl     one question edge per line
    mentions.jsonl  one mention edge per line

Lines are canonical JSON (sorted keys) in the graph's own sort order, so two
builds of the same corpus produce byte-identical stores.  Indexes are not
stored; they are rebuilt on load.
"""

from __future__ import annotations

import hashlib
import json
import os
import shutil
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Union

from .graph import ENTITY, SPAN, Mention, NodeId, QedbGraph, QuestionEdge
from .ingest import decode_span, dumps, encode_span

FORMAT = "qedb-store"
VERSION = 1
FILES = ("nodes.jsonl", "edges.jsonl", "mentions.jsonl")


class StoreError(Exception):
    pass


class StoreVersionError(StoreError):
    pass


def _node_key(n: NodeId) -> Dict[str, Any]:
    if n.kind == ENTITY:
        return {"kind": ENTITY, "entity_id": n.entity_id}
    return {"kind": SPAN, "doc_id": n.doc_id, "start": n.start, "end": n.end}


def _node_from_key(obj: Dict[str, Any]) -> NodeId:
    kind = obj["kind"]
    if kind == ENTITY:
        return NodeId.entity(obj["entity_id"])
    if kind == SPAN:
        return NodeId(SPAN, obj["doc_id"], int(obj["start"]), int(obj["end"]))
    raise ValueError(f"unknown node kind {kind!r}")


def encode_node(node: NodeId, text: str) -> Dict[str, Any]:
    return {**_node_key(node), "text": text}


def encode_edge(edge: QuestionEdge) -> Dict[str, Any]:
    return {
        "record_id": edge.record_id,
        "label": edge.label,
        "question": edge.question,
        "sources": [_node_key(n) for n in edge.sources],
        "target": _node_key(edge.target),
        "q_spans": [encode_span(s) for s in edge.q_spans],
        "min_align_confidence": edge.min_align_confidence,
    }


def decode_edge(obj: Dict[str, Any]) -> QuestionEdge:
    return QuestionEdge(
        record_id=obj["record_id"],
        label=obj["label"],
        question=obj["question"],
        sources=tuple(_node_from_key(n) for n in obj["sources"]),
        target=_node_from_key(obj["target"]),
        q_spans=tuple(decode_span(s) for s in obj["q_spans"]),
        min_align_confidence=float(obj["min_align_confidence"]),
    )


def encode_mention(m: Mention) -> Dict[str, Any]:
    return {
        "entity_id": m.entity_id,
        "target": _node_key(m.target),
        "source": m.source,
        "confidence": m.confidence,
        "record_id": m.record_id,
        "reference_index": m.reference_index,
        "similarity": m.similarity,
    }


def decode_mention(obj: Dict[str, Any]) -> Mention:
    return Mention(
        entity_id=obj["entity_id"],
        target=_node_from_key(obj["target"]),
        source=obj["source"],
        confidence=float(obj["confidence"]),
        record_id=obj.get("record_id", ""),
        reference_index=int(obj.get("reference_index", -1)),
        similarity=float(obj.get("similarity", 1.0)),
    )


def _serialize(graph: QedbGraph) -> Dict[str, bytes]:
    def body(rows: Iterable[Dict[str, Any]]) -> bytes:
        return "".join(dumps(r) + "\n" for r in rows).encode("utf-8")

    return {
        "nodes.jsonl": body(encode_node(n, t) for n, t in graph.nodes.items()),
        "edges.jsonl": body(encode_edge(e) for e in graph.edges),
        "mentions.jsonl": body(encode_mention(m) for m in graph.mentions),
    }


def save_store(graph: QedbGraph, path: Union[str, Path]) -> Path:
    """Write ``graph`` to directory ``path``, replacing any existing store.

    The store is assembled in a sibling temp directory and renamed into
    place, so a failed write leaves no partial store behind.
    """
    path = Path(path)
    blobs = _serialize(graph)
    header = {
        "format": FORMAT,
        "version": VERSION,
        "files": {name: hashlib.sha256(blobs[name]).hexdigest() for name in FILES},
        "counts": {
            "nodes": len(graph.nodes),
            "edges": len(graph.edges),
            "mentions": len(graph.mentions),
        },
    }
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = Path(tempfile.mkdtemp(prefix=f".{path.name}.", dir=path.parent))
    except OSError as exc:
        raise StoreError(f"cannot write store at {path}: {exc}") from exc
    try:
        for name in FILES:
            (tmp / name).write_bytes(blobs[name])
        (tmp / "header.json").write_text(json.dumps(header, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        if path.exists():
            if not (path / "header.json").exists() and any(path.iterdir()):
                raise StoreError(f"refusing to overwrite non-store directory {path}")
            shutil.rmtree(path)
        os.replace(tmp, path)
    except OSError as exc:
        shutil.rmtree(tmp, ignore_errors=True)
        raise StoreError(f"cannot write store at {path}: {exc}") from exc
    except StoreError:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    return path


def load_store(path: Union[str, Path]) -> QedbGraph:
    path = Path(path)
    try:
        header = json.loads((path / "header.json").read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise StoreError(f"{path / 'header.json'}: unreadable store header: {exc}") from exc
    if header.get("format") != FORMAT:
        raise StoreError(f"{path}: not a {FORMAT} directory")
    version = header.get("version")
    if not isinstance(version, int) or version > VERSION:
        raise StoreVersionError(
            f"{path}: store format version {version!r} is newer than supported version {VERSION}"
        )
    if version < 1:
        raise StoreVersionError(f"{path}: invalid store format version {version!r}")

    rows: Dict[str, List[Dict[str, Any]]] = {}
    for name in FILES:
        f = path / name
        try:
            blob = f.read_bytes()
        except OSError as exc:
            raise StoreError(f"{f}: {exc}") from exc
        if hashlib.sha256(blob).hexdigest() != header.get("files", {}).get(name):
            raise StoreError(f"{f}: checksum mismatch")
        try:
            rows[name] = [json.loads(line) for line in blob.decode("utf-8").splitlines() if line]
        except ValueError as exc:
            raise StoreError(f"{f}: {exc}") from exc

    try:
        nodes = {_node_from_key(r): r["text"] for r in rows["nodes.jsonl"]}
        edges = [decode_edge(r) for r in rows["edges.jsonl"]]
        mentions = [decode_mention(r) for r in rows["mentions.jsonl"]]
        return QedbGraph(nodes, edges, mentions)
    except (KeyError, TypeError, ValueError) as exc:
        raise StoreError(f"{path}: inconsistent store contents: {exc}") from exc


# -- export -------------------------------------------------------------------


def export_rows(graph: QedbGraph) -> Iterator[Dict[str, Any]]:
    """Lossless dump: entity rows, one quad row per edge, then mention rows.

    Edge rows carry ``(sources, label, answer, entities)``: the source spans
    with text, the abstracted label, the answer span, and the entity ids
    attached to each source and to the answer.
    """
    for n, text in graph.nodes.items():
        if n.kind == ENTITY:
            yield {"type": "entity", "entity_id": n.entity_id, "name": text}
    for e in graph.edges:
        yield {
            "type": "edge",
            "record_id": e.record_id,
            "question": e.question,
            "label": e.label,
            "sources": [encode_node(n, graph.nodes[n]) for n in e.sources],
            "q_spans": [encode_span(s) for s in e.q_spans],
            "answer": encode_node(e.target, graph.nodes[e.target]),
            "min_align_confidence": e.min_align_confidence,
            "source_entities": [sorted(graph.reference_entities(e.record_id, i)) for i in range(e.arity)],
            "answer_entities": sorted(graph.answer_entities(e.record_id)),
        }
    for m in graph.mentions:
        yield {"type": "mention", **encode_mention(m)}


def graph_from_export(lines: Iterable[Union[str, Dict[str, Any]]]) -> QedbGraph:
    """Rebuild a graph from :func:`export_rows` output (lines or dicts)."""
    nodes: Dict[NodeId, str] = {}
    edges: List[QuestionEdge] = []
    mentions: List[Mention] = []
    for line in lines:
        row = json.loads(line) if isinstance(line, str) else line
        if not row:
            continue
        kind = row.get("type")
        if kind == "entity":
            nodes[NodeId.entity(row["entity_id"])] = row["name"]
        elif kind == "edge":
            sources = []
            for s in row["sources"]:
                nid = _node_from_key(s)
                nodes[nid] = s["text"]
                sources.append(nid)
            target = _node_from_key(row["answer"])
            nodes[target] = row["answer"]["text"]
            edges.append(
                QuestionEdge(
                    record_id=row["record_id"],
                    label=row["label"],
                    question=row["question"],
                    sources=tuple(sources),
                    target=target,
                    q_spans=tuple(decode_span(s) for s in row["q_spans"]),
                    min_align_confidence=float(row["min_align_confidence"]),
                )
            )
        elif kind == "mention":
            mentions.append(decode_mention(row))
        else:
            raise ValueError(f"unknown export row type {kind!r}")
    return QedbGraph(nodes, edges, mentions)
