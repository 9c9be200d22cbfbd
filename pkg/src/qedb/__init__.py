"""Question-answer explanation databases.

Build a KB-like graph from generated question/answer pairs whose question
references are aligned to passage spans, attach linked entities, and query
it compositionally (bridge joins, frames, related entities) or by question
similarity.
"""

from .compose import (
    BridgeJoin,
    JoinConstraints,
    RelatedEntity,
    enumerate_bridge_joins,
    frame_query,
    related_entities,
    render_bridge,
    shared_answer_query,
)
from .config import Config, load_config
from .graph import NodeId, QedbGraph, QuestionEdge, abstract_question, build_graph, graph_stats
from .ingest import Corpus, IngestError, corpus_from_items, load_corpus, parse_passages, parse_qa_records
from .linker import ReferenceEntityMatch, is_year, jaccard_similarity, match_corpus, match_entities_to_references, tokenize
from .model import EntityLink, Passage, QaRecord, ReferencePair, Span, validate_record
from .retrieve import Bm25Index, answer_one_hop, build_index, em_f1, retrieve_similar
from .store import StoreError, StoreVersionError, export_rows, graph_from_export, load_store, save_store

__version__ = "0.1.0"
