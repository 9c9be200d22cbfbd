"""Build a graph from the demo corpus and look at what came out.

Each question becomes one labeled edge: its reference spans are replaced by
$1, $2, ... and the edge points from the passage spans those references
denote to the answer span.  Entity links attach spans to entity nodes.
"""

from corpus import load

from qedb import build_graph, graph_stats, match_corpus

corpus = load()
matches = match_corpus(corpus.records, corpus.links_by_doc())
graph = build_graph(corpus, matches)

print("edges")
for edge in graph.edges:
    sources = " + ".join(graph.nodes[s] for s in edge.sources) or "-"
    print(f"  {edge.record_id}: [{sources}] --{edge.label}--> {graph.nodes[edge.target]}")

# question references are matched to linked entities by token overlap
print("\nreference matches")
for m in matches:
    print(f"  {m.record_id} ref {m.reference_index} -> {m.entity_id} (jaccard {m.similarity:.2f} via {m.via})")

print("\nstats")
for key, value in graph_stats(graph).as_dict().items():
    print(f"  {key}: {value}")
