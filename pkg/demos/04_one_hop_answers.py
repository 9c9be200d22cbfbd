"""Answer new questions by retrieving the most similar stored question.

The retriever is BM25 over question texts; the answer is read off the
retrieved edge.  em_f1 scores a predicted answer list against gold spans.
"""

from corpus import load

from qedb import answer_one_hop, build_graph, em_f1
from qedb.retrieve import index_graph

graph = build_graph(load())
index = index_graph(graph)

for query in ["who received the first physics nobel", "where is sarah waters from", "who wrote tipping the velvet"]:
    hits = answer_one_hop(graph, index, query, top_k=3)
    best = hits[0] if hits else None
    print(f"{query!r}")
    if best:
        print(f"  -> {best.answer} (via {best.question!r}, score {best.score:.2f})")

print()
print("EM/F1, exact:   ", em_f1(["Sarah Waters"], ["sarah waters"]))
print("EM/F1, partial: ", em_f1(["Tipping the Velvet"], ["the tv series tipping the velvet"]))
