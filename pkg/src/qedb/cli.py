"""Command-line interface: ``qedb <command> [options]``.

Commands: build, join, related, frame, type2, ask, stats, export.  All
query commands print one JSON object per line.  The store directory
defaults to ``$QEDB_STORE``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 store error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

from . import compose
from .config import Config, load_config
from .graph import build_graph, graph_stats
from .ingest import IngestError, dumps, load_corpus
from .linker import match_corpus
from .retrieve import answer_one_hop, index_graph
from .store import StoreError, export_rows, load_store, save_store

STORE_ENV = "QEDB_STORE"

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_STORE = 0, 1, 2, 3

logger = logging.getLogger("qedb")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _popularity(value: str) -> Any:
    if value.lower() in ("none", "inf", "unlimited"):
        return "none"
    n = int(value)
    if n < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return n


def _add_config_flags(p: argparse.ArgumentParser, *names: str):
    p.add_argument("--config", help="JSON config file (flags override it)")
    if "min_link_confidence" in names:
        p.add_argument("--min-link-confidence", type=float)
    if "min_align_conf" in names:
        p.add_argument("--min-align-conf", type=float)
    if "max_bridge_popularity" in names:
        p.add_argument("--max-bridge-popularity", type=_popularity, help="integer, or 'none' for no cap")
    if "distinctness_threshold" in names:
        p.add_argument("--distinctness-threshold", type=float)
    if "bm25" in names:
        p.add_argument("--bm25-k1", type=float)
        p.add_argument("--bm25-b", type=float)


def _add_store(p: argparse.ArgumentParser):
    p.add_argument("--store", default=None, help=f"store directory (default: ${STORE_ENV})")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qedb", description="Build and query a question-answer explanation database.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("build", help="ingest inputs, link, build and save a store")
    p.add_argument("--passages", required=True)
    p.add_argument("--qa", required=True)
    p.add_argument("--links")
    p.add_argument("--out", default=None, help=f"store directory (default: ${STORE_ENV})")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--strict", dest="strictness", action="store_const", const="strict")
    mode.add_argument("--lenient", dest="strictness", action="store_const", const="lenient")
    _add_config_flags(p, "min_link_confidence")

    p = sub.add_parser("join", help="enumerate bridge joins")
    _add_store(p)
    _add_config_flags(p, "min_link_confidence", "min_align_conf", "max_bridge_popularity")
    p.add_argument("--allow-multi-ref", action="store_true", help="q2 may have several references")
    p.add_argument("--allow-years", action="store_true", help="keep year-like bridges")
    p.add_argument("--allow-multi-answer", action="store_true")
    p.add_argument("--allow-answer-in-q1", action="store_true")
    p.add_argument("--match-mode", choices=[compose.ENTITY_MODE, compose.STRING_MODE], default=compose.ENTITY_MODE)

    p = sub.add_parser("related", help="rank entities related to an entity")
    _add_store(p)
    _add_config_flags(p, "min_link_confidence")
    p.add_argument("--entity", required=True)
    p.add_argument("--top", type=int, default=10)

    p = sub.add_parser("frame", help="questions using an entity as a reference, by label")
    _add_store(p)
    _add_config_flags(p)
    p.add_argument("--entity", required=True)

    p = sub.add_parser("type2", help="pairs of different questions sharing an answer entity")
    _add_store(p)
    _add_config_flags(p, "distinctness_threshold")
    p.add_argument("--entity", required=True)

    p = sub.add_parser("ask", help="one-hop answers by question similarity")
    _add_store(p)
    _add_config_flags(p, "bm25")
    p.add_argument("query")
    p.add_argument("--top", type=int, default=10)

    p = sub.add_parser("stats", help="graph statistics")
    _add_store(p)

    p = sub.add_parser("export", help="lossless line-delimited graph dump")
    _add_store(p)
    return parser


def resolve_config(args: argparse.Namespace) -> Config:
    """Defaults, then the config file, then command-line flags."""
    config = load_config(args.config) if getattr(args, "config", None) else Config()
    overrides: Dict[str, Any] = {}
    for name in (
        "min_link_confidence",
        "min_align_conf",
        "distinctness_threshold",
        "bm25_k1",
        "bm25_b",
        "strictness",
    ):
        overrides[name] = getattr(args, name, None)
    config = config.merged(overrides)
    pop = getattr(args, "max_bridge_popularity", None)
    if pop == "none":
        config = replace(config, max_bridge_popularity=None)
    elif pop is not None:
        config = replace(config, max_bridge_popularity=pop)
    return config


def _store_path(value: Optional[str]) -> Path:
    value = value or os.environ.get(STORE_ENV)
    if not value:
        raise UsageError(f"no store given (use --store or set ${STORE_ENV})")
    return Path(value)


def _emit(rows: Iterable[Dict[str, Any]], out):
    for row in rows:
        out.write(dumps(row) + "\n")


def cmd_build(args, config: Config, out) -> int:
    links = args.links
    if links and not Path(links).exists():
        logger.warning("links file %s not found; building without an entity layer", links)
        links = None
    elif not links:
        logger.warning("no links file given; building without an entity layer")
    dest = Path(args.out) if args.out else _store_path(None)
    corpus = load_corpus(args.passages, args.qa, links, config.strictness)
    matches = match_corpus(corpus.records, corpus.links_by_doc(), config.min_link_confidence)
    graph = build_graph(corpus, matches, config)
    save_store(graph, dest)
    stats = {"store": str(dest), **corpus.stats.__dict__, **graph_stats(graph).as_dict()}
    _emit([stats], out)
    return EXIT_OK


def cmd_join(args, config: Config, out) -> int:
    graph = load_store(_store_path(args.store))
    constraints = compose.JoinConstraints(
        single_ref_q2=not args.allow_multi_ref,
        single_answer=not args.allow_multi_answer,
        min_align_conf=config.min_align_conf,
        bridge_not_year=not args.allow_years,
        max_bridge_popularity=config.max_bridge_popularity,
        q2_answer_not_in_q1=not args.allow_answer_in_q1,
        min_link_confidence=config.min_link_confidence,
        match_mode=args.match_mode,
    )
    _emit((compose.join_row(j) for j in compose.enumerate_bridge_joins(graph, constraints)), out)
    return EXIT_OK


def cmd_related(args, config: Config, out) -> int:
    if args.top < 1:
        raise UsageError("--top must be >= 1")
    graph = load_store(_store_path(args.store))
    rows = compose.related_entities(graph, args.entity, args.top, config.min_link_confidence)
    _emit((compose.related_row(r) for r in rows), out)
    return EXIT_OK


def cmd_frame(args, config: Config, out) -> int:
    graph = load_store(_store_path(args.store))
    _emit(compose.frame_rows(compose.frame_query(graph, args.entity)), out)
    return EXIT_OK


def cmd_type2(args, config: Config, out) -> int:
    graph = load_store(_store_path(args.store))
    pairs = compose.shared_answer_query(graph, args.entity, config.distinctness_threshold)
    _emit((compose.shared_answer_row(p) for p in pairs), out)
    return EXIT_OK


def cmd_ask(args, config: Config, out) -> int:
    if args.top < 1:
        raise UsageError("--top must be >= 1")
    graph = load_store(_store_path(args.store))
    index = index_graph(graph, config.bm25_k1, config.bm25_b)
    answers = answer_one_hop(graph, index, args.query, args.top)
    _emit(
        (
            {"query": args.query, "rank": rank, "answer": a.answer, "question": a.question,
             "record_id": a.record_id, "score": a.score}
            for rank, a in enumerate(answers, start=1)
        ),
        out,
    )
    return EXIT_OK


def cmd_stats(args, config: Config, out) -> int:
    graph = load_store(_store_path(args.store))
    _emit([graph_stats(graph).as_dict()], out)
    return EXIT_OK


def cmd_export(args, config: Config, out) -> int:
    graph = load_store(_store_path(args.store))
    _emit(export_rows(graph), out)
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "join": cmd_join,
    "related": cmd_related,
    "frame": cmd_frame,
    "type2": cmd_type2,
    "ask": cmd_ask,
    "stats": cmd_stats,
    "export": cmd_export,
}


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    try:
        config = resolve_config(args)
        return COMMANDS[args.command](args, config, out)
    except UsageError as exc:
        print(f"qedb: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StoreError as exc:
        print(f"qedb: store error: {exc}", file=sys.stderr)
        return EXIT_STORE
    except (IngestError, ValueError, OSError) as exc:
        print(f"qedb: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
