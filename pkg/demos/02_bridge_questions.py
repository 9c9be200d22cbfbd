"""Compose two-hop questions by joining stored questions on a shared entity.

A join pairs q1 with q2 when q1's answer links to the entity that q2 asks
about.  The result reads as a two-step program: answer q1, then substitute
that answer for $1 in q2.
"""

from dataclasses import replace

from corpus import load

from qedb import JoinConstraints, build_graph, enumerate_bridge_joins, match_corpus, render_bridge

corpus = load()
graph = build_graph(corpus, match_corpus(corpus.records, corpus.links_by_doc()))

defaults = JoinConstraints()
for join in enumerate_bridge_joins(graph, defaults):
    print(f"bridge {join.bridge_name} ({join.q1} -> {join.q2})")
    print("  " + render_bridge(join).replace("\n", "\n  "))
    print(f"  answer: {join.answer}\n")

# Years make poor bridges, so "1966" joins nothing by default.  Let them
# through to see the questions they would produce.
kept = set(enumerate_bridge_joins(graph, defaults))
loose = replace(defaults, bridge_not_year=False)
for join in enumerate_bridge_joins(graph, loose):
    if join not in kept:
        print("year bridge: " + render_bridge(join).replace("\n", " / "))

# Demanding perfect alignments on both sides removes everything here.
strict = replace(defaults, min_align_conf=1.0)
print(f"{len(list(enumerate_bridge_joins(graph, strict)))} joins with min_align_conf=1.0")
