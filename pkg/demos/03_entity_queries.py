"""Entity-centric queries: related entities, frames and shared answers."""

from corpus import load

from qedb import build_graph, match_corpus
from qedb.compose import frame_query, related_entities, shared_answer_query

corpus = load()
graph = build_graph(corpus, match_corpus(corpus.records, corpus.links_by_doc()))

# Which entities do questions answered by Sarah Waters mention?
for rel in related_entities(graph, "Q_waters", k=5):
    print(f"{rel.related_name}: {rel.support} question(s), e.g. {rel.example_question!r}")

# Everything the stored questions say about Sarah Waters, one group per label.
print()
for group in frame_query(graph, "Q_waters"):
    answers = ", ".join(e.answer for e in group.entries)
    print(f"{group.label} -> {answers}")

# Differently worded questions with the same answer entity.
print()
for pair in shared_answer_query(graph, "Q_waters"):
    print(f"{pair.question1!r} ~ {pair.question2!r} (jaccard {pair.similarity:.2f})")
